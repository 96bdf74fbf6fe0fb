//! Sturm sequences and exact real-root counting.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Sturm sequence `p, p', -rem(p, p'), ...`, each term divided by a positive
/// constant to keep coefficients small. Signs are preserved exactly.
pub fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone()];
    if p.deg() == 0 {
        return seq;
    }
    seq.push(p.derivative());
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if b.deg() == 0 {
            break;
        }
        // prem(a, b) = lc(b)^(delta+1) * rem(a, b); undo the sign of that factor.
        let delta = a.deg() - b.deg();
        let mut r = a.pseudo_rem(b);
        if r.is_zero() {
            break;
        }
        if b.lc().unwrap().is_negative() && delta % 2 == 0 {
            r = -&r;
        }
        let r = -&r;
        let c = r.content();
        seq.push(UniPoly::new(r.coeffs().iter().map(|x| x / &c).collect()));
    }
    seq
}

fn sign_changes<I: Iterator<Item = Ordering>>(signs: I) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sign variations of the sequence at `x`.
pub fn variations_at(seq: &[UniPoly], x: &BigRational) -> usize {
    sign_changes(seq.iter().map(|q| q.sign_at(x)))
}

/// Sign variations at `+infinity` (`positive`) or `-infinity`.
pub fn variations_at_infinity(seq: &[UniPoly], positive: bool) -> usize {
    sign_changes(seq.iter().map(|q| {
        let s = q.lc().map_or(Ordering::Equal, |c| c.sign_ordering());
        if positive || q.deg() % 2 == 0 {
            s
        } else {
            s.reverse()
        }
    }))
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for num_bigint::BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&num_bigint::BigInt::zero())
    }
}

/// Number of distinct real roots of `p` in `(a, b]`.
pub fn sturm_count(p: &UniPoly, a: &BigRational, b: &BigRational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a >= b {
        return Err(Error::EmptyInterval);
    }
    for x in [a, b] {
        if p.sign_at(x) == Ordering::Equal {
            return Err(Error::EndpointIsRoot(x.to_string()));
        }
    }
    let seq = sturm_sequence(p);
    Ok(count_with(&seq, a, b))
}

/// Count using a precomputed sequence; endpoints must not be roots.
pub fn count_with(seq: &[UniPoly], a: &BigRational, b: &BigRational) -> usize {
    variations_at(seq, a) - variations_at(seq, b)
}

/// Number of distinct real roots of `p`.
pub fn real_root_count(p: &UniPoly) -> usize {
    if p.is_zero() || p.deg() == 0 {
        return 0;
    }
    let seq = sturm_sequence(p);
    variations_at_infinity(&seq, false) - variations_at_infinity(&seq, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn simple_counts() {
        assert_eq!(sturm_count(&up(&[-2, 0, 1]), &q(0, 1), &q(2, 1)).unwrap(), 1);
        assert_eq!(sturm_count(&up(&[-4, 0, 1]), &q(-1, 1), &q(2, 1)), Err(Error::EndpointIsRoot("2".into())));
        assert_eq!(sturm_count(&up(&[-1, -1, -1, 1]), &q(1, 1), &q(2, 1)).unwrap(), 1);
        assert_eq!(sturm_count(&up(&[1, 0, 1]), &q(-10, 1), &q(10, 1)).unwrap(), 0);
        assert!(sturm_count(&up(&[1, 0, 1]), &q(1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn total_counts() {
        // (x-1)(x+2)(x-3)(x^2+1)
        let p = &(&(&up(&[-1, 1]) * &up(&[2, 1])) * &up(&[-3, 1])) * &up(&[1, 0, 1]);
        assert_eq!(real_root_count(&p), 3);
        assert_eq!(real_root_count(&up(&[-1, -1, -1, 1])), 1);
        assert_eq!(real_root_count(&up(&[-1, 0, -1, -1, 0, 1])), 1);
        assert_eq!(sturm_count(&p, &q(-5, 2), &q(5, 2)).unwrap(), 2);
    }
}
