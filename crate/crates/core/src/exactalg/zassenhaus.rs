//! Factorization over the integers: modular factorization at a small prime,
//! quadratic Hensel lifting, and exhaustive recombination of lifted factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::modpoly::{self, is_prime};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// What the lifting run used; stored in certificates so the run can be repeated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftRecord {
    pub prime: u64,
    /// Number of modular irreducible factors at `prime`.
    pub modular_factors: usize,
    /// `2^deg * ceil(||p||_2)`.
    #[serde(with = "crate::wire::bigint")]
    pub mignotte_bound: BigInt,
    /// Final modulus `prime^exponent`.
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Irreducible factors, primitive with positive leading coefficient,
    /// sorted by degree then coefficients.
    pub factors: Vec<UniPoly>,
    /// `None` when the polynomial was linear and no lifting was needed.
    pub record: Option<LiftRecord>,
}

/// The coefficient bound `2^deg * ceil(sqrt(sum c_i^2))`.
pub fn mignotte_bound(p: &UniPoly) -> BigInt {
    let n2 = p.norm_sq();
    let mut r = n2.sqrt();
    if &r * &r < n2 {
        r += 1;
    }
    r << p.deg()
}

/// Complete factorization of a primitive squarefree polynomial.
pub fn factor_over_z(p: &UniPoly) -> Result<Vec<UniPoly>> {
    Ok(factor_over_z_detailed(p)?.factors)
}

pub fn factor_over_z_detailed(p: &UniPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let c = p.content();
    if !c.is_one() {
        return Err(Error::NotPrimitive(c.to_string()));
    }
    if !p.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let f = normalize(p);
    if f.deg() == 1 {
        return Ok(Factorization {
            factors: vec![f],
            record: None,
        });
    }
    let lc = f.lc().unwrap().clone();
    let prime = choose_prime(&f, &lc);
    let fp = modpoly::reduce_coeffs(&f, prime);
    let fp_monic = modpoly::make_monic(&fp, prime);
    let local: Vec<Vec<u64>> = modpoly::factor_monic_mod_p(&fp_monic, prime)
        .into_iter()
        .map(|(g, _)| g)
        .collect();
    let bound = mignotte_bound(&f);
    let mut record = LiftRecord {
        prime,
        modular_factors: local.len(),
        mignotte_bound: bound.clone(),
        exponent: 1,
    };
    if local.len() == 1 {
        return Ok(Factorization {
            factors: vec![f],
            record: Some(record),
        });
    }
    let target = BigInt::from(2) * lc.abs() * &bound;
    let pb = BigInt::from(prime);
    let mut modulus = pb.clone();
    while modulus <= target {
        modulus = &modulus * &modulus;
        record.exponent *= 2;
    }
    let lifted = multifactor_lift(&f, &local, prime, &modulus);
    let mut factors = recombine(f, lifted, &modulus);
    factors.sort();
    factors.sort_by_key(|g| g.deg());
    Ok(Factorization {
        factors,
        record: Some(record),
    })
}

fn normalize(p: &UniPoly) -> UniPoly {
    if p.lc().unwrap().is_negative() {
        -p
    } else {
        p.clone()
    }
}

/// Smallest prime at least 3 not dividing the leading coefficient whose
/// reduction stays squarefree.
fn choose_prime(f: &UniPoly, lc: &BigInt) -> u64 {
    (3u64..)
        .filter(|&q| is_prime(q))
        .find(|&q| {
            if (lc % BigInt::from(q)).is_zero() {
                return false;
            }
            let r = modpoly::make_monic(&modpoly::reduce_coeffs(f, q), q);
            modpoly::gcd(&r, &modpoly::derivative(&r, q), q).len() == 1
        })
        .expect("a squarefree polynomial has good reduction at all but finitely many primes")
}

fn from_residues(v: &[u64]) -> UniPoly {
    UniPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn reduce(p: &UniPoly, m: &BigInt) -> UniPoly {
    p.rem_coeffs(m)
}

/// Monic lifted factors `u_i` with `f = lc(f) * prod u_i mod modulus`.
fn multifactor_lift(f: &UniPoly, local: &[Vec<u64>], prime: u64, modulus: &BigInt) -> Vec<UniPoly> {
    if local.len() == 1 {
        let lc = f.lc().unwrap();
        let inv = lc
            .modinv(modulus)
            .expect("leading coefficient is a unit modulo the lifting modulus");
        return vec![reduce(&f.scale(&inv), modulus)];
    }
    let (left, right) = local.split_at(local.len() / 2);
    let lc_p = modpoly::reduce_coeffs(&UniPoly::constant(f.lc().unwrap().clone()), prime);
    let mut g0 = lc_p;
    for u in left {
        g0 = modpoly::mul(&g0, u, prime);
    }
    let mut h0 = vec![1u64];
    for u in right {
        h0 = modpoly::mul(&h0, u, prime);
    }
    let (one, s0, t0) = modpoly::ext_gcd(&g0, &h0, prime);
    debug_assert_eq!(one, vec![1]);
    let (g, h) = hensel_lift(
        f,
        from_residues(&g0),
        from_residues(&h0),
        from_residues(&s0),
        from_residues(&t0),
        prime,
        modulus,
    );
    let mut out = multifactor_lift(&g, left, prime, modulus);
    out.extend(multifactor_lift(&h, right, prime, modulus));
    out
}

/// Quadratic Hensel lifting of `f = g h mod p` (h monic, `s g + t h = 1 mod p`)
/// until the modulus reaches `target`, which must be a power of `p`.
fn hensel_lift(
    f: &UniPoly,
    mut g: UniPoly,
    mut h: UniPoly,
    mut s: UniPoly,
    mut t: UniPoly,
    prime: u64,
    target: &BigInt,
) -> (UniPoly, UniPoly) {
    let mut m = BigInt::from(prime);
    while &m < target {
        let m2 = &m * &m;
        let e = reduce(&(f - &(&g * &h)), &m2);
        let (q, r) = reduce(&(&s * &e), &m2).div_rem_monic(&h);
        let g_new = reduce(&(&(&g + &(&t * &e)) + &(&q * &g)), &m2);
        let h_new = reduce(&(&h + &r), &m2);
        let b = reduce(&(&(&(&s * &g_new) + &(&t * &h_new)) - &UniPoly::one()), &m2);
        let (c, d) = reduce(&(&s * &b), &m2).div_rem_monic(&h_new);
        s = reduce(&(&s - &d), &m2);
        t = reduce(&(&(&t - &(&t * &b)) - &(&c * &g_new)), &m2);
        g = g_new;
        h = h_new;
        m = m2;
    }
    (g, h)
}

/// Find true factors among products of subsets of lifted factors, smallest
/// subsets first, confirming each candidate by exact division.
fn recombine(mut f: UniPoly, lifted: Vec<UniPoly>, modulus: &BigInt) -> Vec<UniPoly> {
    let mut remaining: Vec<UniPoly> = lifted;
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        let lc = f.lc().unwrap().clone();
        let lc_f0 = &lc * f.coeff(0);
        for subset in Combinations::new(remaining.len(), size) {
            let mut g = UniPoly::constant(lc.clone());
            // The constant term must divide lc * f(0); check it before the full product.
            let mut c0 = lc.clone();
            for &i in &subset {
                c0 = (c0 * remaining[i].coeff(0)).mod_floor(modulus);
            }
            let c0 = symmetric(&c0, modulus);
            if c0.is_zero() {
                if !lc_f0.is_zero() {
                    continue;
                }
            } else if !(&lc_f0 % &c0).is_zero() {
                continue;
            }
            for &i in &subset {
                g = reduce(&(&g * &remaining[i]), modulus);
            }
            let g = g.symmetric_rem(modulus).primitive_part();
            if let Some(q) = f.div_exact(&g) {
                found.push(g);
                f = normalize(&q);
                let mut k = 0;
                remaining.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
                continue 'outer;
            }
        }
        size += 1;
    }
    found.push(f);
    found
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if r > (m >> 1) {
        r - m
    } else {
        r
    }
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// `true` iff the primitive squarefree polynomial has no nontrivial factor.
pub fn is_irreducible_over_z(p: &UniPoly) -> Result<bool> {
    Ok(factor_over_z(p)?.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    fn product(fs: &[UniPoly]) -> UniPoly {
        fs.iter().fold(UniPoly::one(), |acc, f| &acc * f)
    }

    #[test]
    fn cyclotomic_pieces() {
        let fs = factor_over_z(&up(&[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fs, vec![up(&[-1, 1]), up(&[1, 1]), up(&[1, 0, 1])]);
    }

    #[test]
    fn irreducible_quintic() {
        let p = up(&[-1, 0, -1, -1, 0, 1]);
        assert_eq!(factor_over_z(&p).unwrap(), vec![p]);
    }

    #[test]
    fn product_of_known_factors() {
        let a = up(&[-1, -1, -1, 1]);
        let b = up(&[1, 0, 1]);
        let fs = factor_over_z(&(&a * &b)).unwrap();
        assert_eq!(fs, vec![b, a]);
    }

    #[test]
    fn non_monic_and_many_factors() {
        let parts = [up(&[1, 2]), up(&[-3, 1]), up(&[2, 0, 3]), up(&[1, 1, 1]), up(&[5, -1])];
        let p = product(&parts);
        let fs = factor_over_z(&p).unwrap();
        assert_eq!(fs.len(), 5);
        let q = product(&fs);
        assert!(q == p || q == -&p);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // x^4 - 10x^2 + 1 is irreducible but splits into quadratics or linears mod every prime.
        let p = up(&[1, 0, -10, 0, 1]);
        let d = factor_over_z_detailed(&p).unwrap();
        assert_eq!(d.factors, vec![p]);
        assert!(d.record.unwrap().modular_factors >= 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(factor_over_z(&UniPoly::zero()), Err(Error::ZeroPolynomial));
        assert_eq!(factor_over_z(&up(&[1, 2, 1])), Err(Error::NotSquarefree));
        assert!(matches!(factor_over_z(&up(&[2, 4])), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn mignotte_value() {
        // ||x^3 - x^2 - x - 1||_2 = 2, so the bound is 2^3 * 2.
        assert_eq!(mignotte_bound(&up(&[-1, -1, -1, 1])), BigInt::from(16));
    }
}
