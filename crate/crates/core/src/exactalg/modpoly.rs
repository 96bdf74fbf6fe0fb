//! Polynomials over prime fields `F_p` with `p < 2^31`, and their factorization.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::UniPoly;
use crate::error::{Error, Result};

/// Trial-division primality test; moduli used here stay below `10^6`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in `[lo, hi)`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..hi).filter(|&n| is_prime(n)).collect()
}

/// Polynomial over `F_p`, residues in `[0, p)`, no trailing zero residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModPoly {
    coeffs: Vec<u64>,
    modulus: u64,
}

impl ModPoly {
    /// Checked constructor: reduces residues and verifies the modulus is prime.
    pub fn new(coeffs: Vec<u64>, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) || modulus >= 1 << 31 {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self::from_raw(coeffs.into_iter().map(|c| c % modulus).collect(), modulus))
    }

    pub(crate) fn from_raw(mut coeffs: Vec<u64>, modulus: u64) -> Self {
        trim(&mut coeffs);
        ModPoly { coeffs, modulus }
    }

    /// Reduction of an integer polynomial.
    pub fn reduce(p: &UniPoly, modulus: u64) -> Result<Self> {
        if !is_prime(modulus) || modulus >= 1 << 31 {
            return Err(Error::NotPrime(modulus));
        }
        Ok(Self::from_raw(reduce_coeffs(p, modulus), modulus))
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        debug_assert_eq!(self.modulus, other.modulus);
        ModPoly::from_raw(mul(&self.coeffs, &other.coeffs, self.modulus), self.modulus)
    }

    /// Lift residues to an integer polynomial with coefficients in `[0, p)`.
    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }
}

impl fmt::Display for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) mod {}", self.to_unipoly(), self.modulus)
    }
}

pub(crate) fn reduce_coeffs(p: &UniPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut v: Vec<u64> = p
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&mb).to_u64().unwrap())
        .collect();
    trim(&mut v);
    v
}

// ---------------------------------------------------------------------------
// Slice-level arithmetic over F_p. Polynomials are little-endian residue
// vectors without trailing zeros.
// ---------------------------------------------------------------------------

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| x * c % p).collect();
    trim(&mut out);
    out
}

pub(crate) fn make_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, inv_mod(lc, p), p),
    }
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for top in (db..a.len()).rev() {
        let c = r[top] * inv % p;
        if c == 0 {
            continue;
        }
        let shift = top - db;
        q[shift] = c;
        let neg = p - c;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + neg * bc) % p;
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    div_rem(a, b, p).1
}

/// Monic gcd (empty when both inputs are zero).
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(&a, p)
}

/// Extended Euclid: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub(crate) fn ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("not both zero"), p);
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

fn powmod_u64(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    rem(&acc, m, p)
}

fn powmod_big(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = mulmod(&acc, &acc, m, p);
        if e.bit(i) {
            acc = mulmod(&acc, &b, m, p);
        }
    }
    rem(&acc, m, p)
}

pub(crate) fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    trim(&mut out);
    out
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` squarefree, monic, pairwise coprime.
fn squarefree_decomposition(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let df = derivative(f, p);
    let mut c = gcd(f, &df, p);
    let mut w = div_rem(f, &c, p).0;
    let mut i = 1;
    while w.len() > 1 {
        let y = gcd(&w, &c, p);
        let fac = div_rem(&w, &y, p).0;
        if fac.len() > 1 {
            out.push((fac, i));
        }
        w = y;
        c = div_rem(&c, &w, p).0;
        i += 1;
    }
    if c.len() > 1 {
        // c is a p-th power: take the p-th root coefficient-wise.
        let root: Vec<u64> = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree_decomposition(&root, p) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs `(product of all irreducible factors of degree d, d)`.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 1;
    while f.len() > 1 && 2 * d < f.len() {
        h = powmod_u64(&h, p, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            f = div_rem(&f, &g, p).0;
            h = rem(&h, &f, p);
            out.push((g, d));
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of irreducibles of degree `d`.
fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let exponent = if p == 2 {
        BigUint::zero()
    } else {
        (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32
    };
    loop {
        let a: Vec<u64> = {
            let mut v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
            trim(&mut v);
            v
        };
        if a.len() <= 1 {
            continue;
        }
        let b = if p == 2 {
            // Trace map: a + a^2 + ... + a^(2^(d-1)).
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            sub(&powmod_big(&a, &exponent, f, p), &[1], p)
        };
        let g = gcd(&b, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let other = div_rem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&other, d, p, rng));
            return out;
        }
    }
}

fn check_reduction(p: &UniPoly, prime: u64) -> Result<Vec<u64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_prime(prime) || prime >= 1 << 31 {
        return Err(Error::NotPrime(prime));
    }
    let f = reduce_coeffs(p, prime);
    if f.len() != p.coeffs().len() {
        return Err(Error::BadReduction { prime });
    }
    Ok(f)
}

/// Complete factorization of `p mod prime` into monic irreducibles with
/// multiplicities, sorted by degree then residues.
pub fn factor_mod_p(p: &UniPoly, prime: u64) -> Result<Vec<(ModPoly, usize)>> {
    let f = make_monic(&check_reduction(p, prime)?, prime);
    Ok(factor_monic_mod_p(&f, prime)
        .into_iter()
        .map(|(g, m)| (ModPoly::from_raw(g, prime), m))
        .collect())
}

pub(crate) fn factor_monic_mod_p(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f, p) {
        for (block, d) in distinct_degree(&part, p) {
            for g in equal_degree(&block, d, p, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by(|a, b| {
        (a.0.len(), a.0.iter().rev().collect::<Vec<_>>())
            .cmp(&(b.0.len(), b.0.iter().rev().collect::<Vec<_>>()))
    });
    out
}

/// Factor degrees of a squarefree reduction, used for sieving.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreePattern {
    /// Sorted multiset of irreducible factor degrees.
    Usable(Vec<usize>),
    /// The reduction is not squarefree.
    UnusablePrime,
}

/// Irreducible factor degrees of `p mod prime` (distinct-degree factorization only).
pub fn degree_pattern(p: &UniPoly, prime: u64) -> Result<DegreePattern> {
    let f = make_monic(&check_reduction(p, prime)?, prime);
    Ok(degree_pattern_monic(&f, prime))
}

pub(crate) fn degree_pattern_monic(f: &[u64], p: u64) -> DegreePattern {
    if gcd(f, &derivative(f, p), p).len() > 1 {
        return DegreePattern::UnusablePrime;
    }
    let mut degrees = Vec::new();
    for (block, d) in distinct_degree(f, p) {
        let count = (block.len() - 1) / d;
        degrees.extend(std::iter::repeat_n(d, count));
    }
    degrees.sort_unstable();
    DegreePattern::Usable(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(999_983));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(1_000_000));
        assert!(ModPoly::new(vec![1, 1], 4).is_err());
    }

    #[test]
    fn cubic_irreducible_mod_3() {
        let f = factor_mod_p(&up(&[-1, -1, -1, 1]), 3).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.degree(), Some(3));
        assert_eq!(f[0].1, 1);
    }

    #[test]
    fn cubic_is_cube_mod_2() {
        // (x+1)^3 = x^3 + x^2 + x + 1 = x^3 - x^2 - x - 1 mod 2
        let f = factor_mod_p(&up(&[-1, -1, -1, 1]), 2).unwrap();
        assert_eq!(f, vec![(ModPoly::new(vec![1, 1], 2).unwrap(), 3)]);
        assert_eq!(
            degree_pattern(&up(&[-1, -1, -1, 1]), 2).unwrap(),
            DegreePattern::UnusablePrime
        );
    }

    #[test]
    fn difference_of_squares_mod_5() {
        let f = factor_mod_p(&up(&[-1, 0, 1]), 5).unwrap();
        assert_eq!(
            f,
            vec![
                (ModPoly::new(vec![1, 1], 5).unwrap(), 1),
                (ModPoly::new(vec![4, 1], 5).unwrap(), 1)
            ]
        );
        assert_eq!(
            degree_pattern(&up(&[-1, 0, 1]), 5).unwrap(),
            DegreePattern::Usable(vec![1, 1])
        );
    }

    #[test]
    fn bad_reduction() {
        assert_eq!(
            factor_mod_p(&up(&[1, 0, 3]), 3),
            Err(Error::BadReduction { prime: 3 })
        );
    }

    #[test]
    fn p_th_power_parts() {
        // (x^2+1)^3 * (x+2) over F_3
        let g = up(&[1, 0, 1]);
        let f = &(&(&g * &g) * &g) * &up(&[2, 1]);
        let fac = factor_mod_p(&f, 3).unwrap();
        assert_eq!(fac.len(), 2);
        assert!(fac.contains(&(ModPoly::new(vec![1, 0, 1], 3).unwrap(), 3)));
        assert!(fac.contains(&(ModPoly::new(vec![2, 1], 3).unwrap(), 1)));
    }

    #[test]
    fn ext_gcd_bezout() {
        let p = 7;
        let a = vec![1, 2, 1]; // (x+1)^2
        let b = vec![3, 1]; // x+3
        let (g, s, t) = ext_gcd(&a, &b, p);
        assert_eq!(g, vec![1]);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), vec![1]);
    }
}
