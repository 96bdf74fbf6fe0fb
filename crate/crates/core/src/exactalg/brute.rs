//! Exhaustive factor search for small monic polynomials with unit constant term.
//!
//! Independent of every modular routine: candidates are integer polynomials
//! pinned by their values at small integer points (each value must divide
//! the polynomial's value there), then checked against the coefficient bound
//! and by exact division.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::unipoly::UniPoly;
use super::zassenhaus::mignotte_bound;
use crate::error::{Error, Result};

/// Largest degree the exhaustive search accepts.
pub const MAX_ORACLE_DEGREE: usize = 12;
const MAX_ORACLE_COEFF: i64 = 1 << 20;
const SAMPLE_POINTS: [i128; 13] = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6];

/// Search for a monic factor of degree at most `max_factor_degree`; returns the
/// smallest-degree factor found together with its cofactor, or `None` when no
/// factor of those degrees exists.
pub fn brute_force_factor(p: &UniPoly, max_factor_degree: usize) -> Result<Option<(UniPoly, UniPoly)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.deg();
    if !p.is_monic() || !p.coeff(0).abs().is_one() {
        return Err(Error::NotUnitMonic);
    }
    if n > MAX_ORACLE_DEGREE {
        return Err(Error::OracleScaleExceeded(format!(
            "degree {n} exceeds {MAX_ORACLE_DEGREE}"
        )));
    }
    let coeffs: Vec<i128> = match p.to_i64s() {
        Some(v) if v.iter().all(|c| c.abs() <= MAX_ORACLE_COEFF) => {
            v.into_iter().map(i128::from).collect()
        }
        _ => {
            return Err(Error::OracleScaleExceeded(format!(
                "coefficients exceed {MAX_ORACLE_COEFF}"
            )))
        }
    };
    let bound = mignotte_bound(p).to_i128().unwrap_or(i128::MAX);
    let search = Search::new(&coeffs, bound);
    for d in 1..=max_factor_degree.min(n / 2) {
        if let Some(g) = search.factor_of_degree(d) {
            let g = UniPoly::new(g.into_iter().map(BigInt::from).collect());
            let h = p.div_exact(&g).expect("candidate was confirmed by exact division");
            return Ok(Some((g, h)));
        }
    }
    Ok(None)
}

struct Point {
    a: i128,
    value: i128,
    divisors: Vec<i128>,
}

struct Search<'a> {
    p: &'a [i128],
    bound: i128,
    points: Vec<Point>,
}

impl<'a> Search<'a> {
    fn new(p: &'a [i128], bound: i128) -> Self {
        let points = SAMPLE_POINTS
            .iter()
            .map(|&a| {
                let value = eval(p, a);
                Point {
                    a,
                    value,
                    divisors: signed_divisors(value),
                }
            })
            .collect();
        Search { p, bound, points }
    }

    fn factor_of_degree(&self, d: usize) -> Option<Vec<i128>> {
        // A root at a sample point gives a linear factor; only +-1 are possible.
        if let Some(pt) = self.points.iter().find(|pt| pt.value == 0) {
            if d == 1 {
                return Some(vec![-pt.a, 1]);
            }
        }
        let mut usable: Vec<&Point> = self.points.iter().filter(|pt| pt.value != 0).collect();
        usable.sort_by_key(|pt| pt.divisors.len());
        if usable.len() < d {
            return None;
        }
        let (pins, filters) = usable.split_at(d);
        let interp = Interpolator::cached(pins.iter().map(|pt| pt.a).collect());
        let mut values = Vec::with_capacity(d);
        self.enumerate(pins, filters, &interp, &mut values)
    }

    fn enumerate(
        &self,
        pins: &[&Point],
        filters: &[&Point],
        interp: &Interpolator,
        values: &mut Vec<i128>,
    ) -> Option<Vec<i128>> {
        let i = values.len();
        if i == pins.len() {
            return self.check(interp, values, filters);
        }
        for &v in &pins[i].divisors {
            // Integer polynomials satisfy g(a) = g(b) mod (a - b).
            let consistent = (0..i).all(|j| (v - values[j]) % (pins[i].a - pins[j].a) == 0);
            if !consistent {
                continue;
            }
            values.push(v);
            let found = self.enumerate(pins, filters, interp, values);
            values.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn check(&self, interp: &Interpolator, values: &[i128], filters: &[&Point]) -> Option<Vec<i128>> {
        let g = interp.monic_through(values)?;
        if g.iter().any(|c| c.abs() > self.bound) {
            return None;
        }
        for pt in filters {
            let gv = eval(&g, pt.a);
            if gv == 0 || pt.value % gv != 0 {
                return None;
            }
        }
        divides(self.p, &g, self.bound).then_some(g)
    }
}

/// Solves for the monic degree-`d` polynomial taking given values at fixed points.
struct Interpolator {
    points: Vec<i128>,
    /// `inverse[j][i] * denom` is the integer weight of value `i` in coefficient `j`.
    weights: Vec<Vec<i128>>,
    denom: i128,
    d: usize,
}

thread_local! {
    static INTERPOLATORS: RefCell<HashMap<Vec<i128>, Rc<Interpolator>>> = RefCell::new(HashMap::new());
}

impl Interpolator {
    fn cached(points: Vec<i128>) -> Rc<Interpolator> {
        INTERPOLATORS.with(|cache| {
            cache
                .borrow_mut()
                .entry(points.clone())
                .or_insert_with(|| Rc::new(Interpolator::new(points.clone(), points.len())))
                .clone()
        })
    }

    fn new(points: Vec<i128>, d: usize) -> Self {
        // Invert the Vandermonde matrix exactly, then clear denominators.
        let n = points.len();
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|j| BigRational::from_integer(BigInt::from(points[i]).pow(j as u32)))
                    .collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("distinct points");
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for x in m[col].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..2 * n {
                        let t = &m[col][c] * &f;
                        m[r][c] = &m[r][c] - t;
                    }
                }
            }
        }
        let mut denom = BigInt::one();
        for row in &m {
            for x in &row[n..] {
                denom = num_integer::Integer::lcm(&denom, x.denom());
            }
        }
        let weights = m
            .iter()
            .map(|row| {
                row[n..]
                    .iter()
                    .map(|x| (x * &denom).to_integer().to_i128().expect("small weights"))
                    .collect()
            })
            .collect();
        Interpolator {
            points,
            weights,
            denom: denom.to_i128().expect("small denominator"),
            d,
        }
    }

    /// Coefficients (constant first, leading 1) or `None` if not integral.
    fn monic_through(&self, values: &[i128]) -> Option<Vec<i128>> {
        let rhs: Vec<i128> = values
            .iter()
            .zip(&self.points)
            .map(|(&v, &a)| v - a.pow(self.d as u32))
            .collect();
        let mut g = Vec::with_capacity(self.d + 1);
        for row in &self.weights {
            let num: i128 = row.iter().zip(&rhs).map(|(w, r)| w * r).sum();
            if num % self.denom != 0 {
                return None;
            }
            g.push(num / self.denom);
        }
        g.push(1);
        Some(g)
    }
}

fn eval(p: &[i128], a: i128) -> i128 {
    p.iter().rev().fold(0, |acc, &c| acc * a + c)
}

fn signed_divisors(v: i128) -> Vec<i128> {
    let mut rest = v.unsigned_abs();
    if rest == 0 {
        return Vec::new();
    }
    let mut out = vec![1u128];
    let mut f = 2u128;
    while f * f <= rest {
        if rest.is_multiple_of(f) {
            let base = out.len();
            let mut power = 1u128;
            while rest.is_multiple_of(f) {
                rest /= f;
                power *= f;
                out.extend((0..base).map(|i| out[i] * power).collect::<Vec<_>>());
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.extend(out.clone().into_iter().map(|d| d * rest).collect::<Vec<_>>());
    }
    let mut out: Vec<i128> = out.into_iter().map(|d| d as i128).collect();
    out.sort_unstable();
    let neg: Vec<i128> = out.iter().map(|x| -x).collect();
    out.extend(neg);
    out
}

/// Exact divisibility of `p` by the monic `g`. A true cofactor obeys the same
/// coefficient bound, so a quotient coefficient beyond it ends the test early.
fn divides(p: &[i128], g: &[i128], bound: i128) -> bool {
    let dg = g.len() - 1;
    let mut r = p.to_vec();
    for top in (dg..r.len()).rev() {
        let q = r[top];
        if q == 0 {
            continue;
        }
        if q.abs() > bound {
            return false;
        }
        for (i, &c) in g.iter().enumerate() {
            r[top - dg + i] -= q * c;
        }
    }
    r[..dg].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn small_cases() {
        assert_eq!(brute_force_factor(&up(&[-1, -1, -1, 1]), 1).unwrap(), None);
        assert_eq!(
            brute_force_factor(&up(&[-1, 0, 1]), 1).unwrap(),
            Some((up(&[-1, 1]), up(&[1, 1])))
        );
        assert_eq!(brute_force_factor(&up(&[-1, 0, -1, -1, 0, 1]), 2).unwrap(), None);
    }

    #[test]
    fn finds_quadratic_factors() {
        let a = up(&[1, 1, 1]);
        let b = up(&[-1, 2, 0, 1]);
        let (g, h) = brute_force_factor(&(&a * &b), 2).unwrap().unwrap();
        assert_eq!(g, a);
        assert_eq!(h, b);
        let c = up(&[1, -2, 0, 1, 1]);
        let d = up(&[-1, 0, 2, -1, 0, 1]);
        let cd = &c * &d;
        let (g, h) = brute_force_factor(&cd, 4).unwrap().unwrap();
        assert!(g.deg() <= 4);
        assert_eq!(&g * &h, cd);
    }

    #[test]
    fn rejects_out_of_scope() {
        assert_eq!(brute_force_factor(&up(&[2, 0, 1]), 1), Err(Error::NotUnitMonic));
        let mut big = vec![0i64; 14];
        big[0] = 1;
        big[13] = 1;
        assert!(matches!(
            brute_force_factor(&up(&big), 6),
            Err(Error::OracleScaleExceeded(_))
        ));
    }
}
