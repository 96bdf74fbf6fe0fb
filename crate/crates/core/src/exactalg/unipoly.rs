//! Dense univariate polynomials over the integers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`. The leading (last) coefficient is
/// never zero; the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `x - r`
    pub fn linear_root(r: i64) -> Self {
        Self::from_i64s(&[-r, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.lc().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn derivative(&self) -> UniPoly {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with a positive leading coefficient.
    pub fn primitive_part(&self) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().is_some_and(Signed::is_negative) {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> UniPoly {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift(&self, by: usize) -> UniPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); by];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let (num, den) = (x.numer(), x.denom());
        let scaled = self.eval_homogeneous(num, den);
        let d = self.deg() as u32;
        BigRational::new(scaled, num_traits::pow(den.clone(), d as usize))
    }

    /// `den^deg * p(num / den)` computed over the integers.
    pub fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        // Horner on the homogenised form: sum c_i num^i den^(d-i).
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc
    }

    /// Sign of `p(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        // den > 0 in a normalised BigRational, so den^deg does not flip signs.
        self.eval_homogeneous(x.numer(), x.denom()).cmp(&BigInt::zero())
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Pseudo-remainder `prem(self, d)` = remainder of `lc(d)^(deg self - deg d + 1) * self` by `d`.
    pub fn pseudo_rem(&self, d: &UniPoly) -> UniPoly {
        assert!(!d.is_zero(), "pseudo-remainder by zero polynomial");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return self.clone();
        }
        let lcd = d.lc().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut e = self.deg() - dd + 1;
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let lr = r[top].clone();
            for c in r.iter_mut() {
                *c *= &lcd;
            }
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * dc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        let scale = num_traits::pow(lcd, e);
        Self::new(r.into_iter().map(|c| c * &scale).collect())
    }

    /// Exact quotient over the integers, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.deg();
        if self.deg() < dd {
            return None;
        }
        let lcd = d.lc().unwrap();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for top in (dd..r.len()).rev() {
            if r[top].is_zero() {
                continue;
            }
            let (qc, rem) = r[top].div_rem(lcd);
            if !rem.is_zero() {
                return None;
            }
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &qc * dc;
            }
            q[shift] = qc;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Division with remainder by a monic divisor.
    pub fn div_rem_monic(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (Self::zero(), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for top in (dd..r.len()).rev() {
            let qc = std::mem::take(&mut r[top]);
            if qc.is_zero() {
                continue;
            }
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate().take(dd) {
                r[shift + i] -= &qc * dc;
            }
            q[shift] = qc;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Greatest common divisor over the integers (primitive, positive leading coefficient).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cont)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// `p / gcd(p, p')`, normalised to a primitive polynomial.
    pub fn squarefree_part(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g.primitive_part())
            .expect("gcd divides the polynomial")
            .primitive_part()
    }

    /// Reduce coefficients into `[0, m)`.
    pub fn rem_coeffs(&self, m: &BigInt) -> UniPoly {
        Self::new(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    /// Symmetric residues in `(-m/2, m/2]`.
    pub fn symmetric_rem(&self, m: &BigInt) -> UniPoly {
        let half: BigInt = m >> 1;
        Self::new(
            self.coeffs
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }

    /// Coefficients as `i64`, if all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| i64::try_from(c).ok()).collect()
    }

    /// Parse the comma-separated, constant-first coefficient list.
    pub fn from_coeff_list(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("coefficient `{}`: {e}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }

    /// Comma-separated, constant-first coefficient list.
    pub fn to_coeff_list(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn add_vecs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            match b.get(i) {
                Some(y) if negate_b => x - y,
                Some(y) => x + y,
                None => x,
            }
        })
        .collect()
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        UniPoly::new(add_vecs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        UniPoly::new(add_vecs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UniPoly {
            type Output = UniPoly;
            fn $m(self, rhs: UniPoly) -> UniPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            if i == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for UniPoly {
    type Err = Error;

    /// Accepts either an expression in `x` (`x^5-x^3-x^2-1`, `3*x^2 - 2x - 1`)
    /// or a constant-first coefficient list (`-1,0,-1,-1,0,1`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if !s.contains('x') {
            return Self::from_coeff_list(s);
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut terms: Vec<&str> = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices().skip(1) {
            if ch == '+' || ch == '-' {
                terms.push(&compact[start..i]);
                start = i;
            }
        }
        terms.push(&compact[start..]);
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let (coef, power) = match body.find('x') {
                None => (
                    body.parse::<BigInt>()
                        .map_err(|e| Error::Parse(format!("term `{body}`: {e}")))?,
                    0usize,
                ),
                Some(pos) => {
                    let c = body[..pos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        BigInt::one()
                    } else {
                        c.parse::<BigInt>()
                            .map_err(|e| Error::Parse(format!("term `{body}`: {e}")))?
                    };
                    let rest = &body[pos + 1..];
                    let p = if rest.is_empty() {
                        1
                    } else if let Some(e) = rest.strip_prefix('^') {
                        e.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("exponent in `{body}`: {e}")))?
                    } else {
                        return Err(Error::Parse(format!("unexpected `{rest}` in `{body}`")));
                    };
                    (c, p)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            if neg {
                coeffs[power] -= coef;
            } else {
                coeffs[power] += coef;
            }
        }
        Ok(Self::new(coeffs))
    }
}
