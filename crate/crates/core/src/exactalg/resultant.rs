//! Resultants of univariate and multivariate integer polynomials.
//!
//! Convention: `res(p, q)` is the determinant of the Sylvester matrix with the
//! `deg q` shifted coefficient rows of `p` on top, followed by the `deg p` rows
//! of `q`, coefficients written from the leading term down. Equivalently
//! `res(p, q) = lc(p)^deg q * prod q(alpha)` over the roots of `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg::{bareiss_det, ExactRing};
use super::multipoly::MultiPoly;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Sylvester matrix of two coefficient lists given low-to-high.
fn sylvester<R: ExactRing>(p: &[R], q: &[R], zero: &R) -> Vec<Vec<R>> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let dim = m + n;
    let mut rows = Vec::with_capacity(dim);
    for (coeffs, shifts) in [(p, n), (q, m)] {
        for s in 0..shifts {
            let mut row = vec![zero.clone(); dim];
            for (j, c) in coeffs.iter().rev().enumerate() {
                row[s + j] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Resultant by Bareiss elimination of the Sylvester matrix.
pub fn resultant_uni(p: &UniPoly, q: &UniPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::UndefinedResultant);
    }
    let zero = BigInt::zero();
    let m = sylvester(p.coeffs(), q.coeffs(), &zero);
    Ok(bareiss_det(m, &BigInt::one()))
}

/// Resultant by the subresultant polynomial remainder sequence. Same
/// convention as [`resultant_uni`]; kept as an independent engine.
pub fn resultant_subresultant(p: &UniPoly, q: &UniPoly) -> Result<BigInt> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::UndefinedResultant);
    }
    if p.deg() == 0 {
        return Ok(num_traits::pow(p.coeff(0), q.deg()));
    }
    if q.deg() == 0 {
        return Ok(num_traits::pow(q.coeff(0), p.deg()));
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut sign = false;
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
        if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
            sign = true;
        }
    }
    let (ca, cb) = (a.content(), b.content());
    let t = num_traits::pow(ca.clone(), b.deg()) * num_traits::pow(cb.clone(), a.deg());
    a = a.primitive_part_signed(&ca);
    b = b.primitive_part_signed(&cb);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.deg(), b.deg());
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.div_scalar_exact(&divisor);
        g = a.lc().unwrap().clone();
        h = pow_ratio(&g, delta, &h, delta);
        if b.deg() == 0 {
            let da = a.deg();
            let hb = pow_ratio(b.lc().unwrap(), da, &h, da);
            let res = t * hb;
            return Ok(if sign { -res } else { res });
        }
    }
}

/// `h^(1-d) * g^d` written as `g^d / h^(d-1)`, which is exact in the PRS.
fn pow_ratio(g: &BigInt, d: usize, h: &BigInt, e: usize) -> BigInt {
    let num = num_traits::pow(g.clone(), d);
    if e == 0 {
        return num * h;
    }
    let den = num_traits::pow(h.clone(), e - 1);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "subresultant division must be exact");
    q
}

impl UniPoly {
    /// Divide by the (possibly negative) content `c`.
    fn primitive_part_signed(&self, c: &BigInt) -> UniPoly {
        self.div_scalar_exact(c)
    }

    fn div_scalar_exact(&self, d: &BigInt) -> UniPoly {
        UniPoly::new(
            self.coeffs()
                .iter()
                .map(|x| {
                    let (q, r) = x.div_rem(d);
                    debug_assert!(r.is_zero(), "scalar division must be exact");
                    q
                })
                .collect(),
        )
    }
}

/// Resultant with respect to `var`, as a polynomial in the remaining variables.
pub fn resultant_multi(p: &MultiPoly, q: &MultiPoly, var: &str) -> Result<MultiPoly> {
    if p.vars() != q.vars() {
        return Err(Error::VariableMismatch);
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::UndefinedResultant);
    }
    let idx = p.var_index(var)?;
    resultant_multi_idx(p, q, idx)
}

pub(crate) fn resultant_multi_idx(p: &MultiPoly, q: &MultiPoly, idx: usize) -> Result<MultiPoly> {
    if !p.contains_var(idx) && !q.contains_var(idx) {
        return Err(Error::NoEliminationVariable(p.vars()[idx].clone()));
    }
    let pc = p.coefficients_in(idx);
    let qc = q.coefficients_in(idx);
    let zero = p.zero_like();
    let m = sylvester(&pc, &qc, &zero);
    Ok(bareiss_det(m, &p.one_like()))
}
