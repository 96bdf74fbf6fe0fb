//! Fraction-free determinants over exact integral domains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// An integral domain with exact division.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_elem(&self, other: &Self) -> Self;
    fn sub_elem(&self, other: &Self) -> Self;
    fn mul_elem(&self, other: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    /// `self / other`, which must be exact.
    fn div_exact_elem(&self, other: &Self) -> Option<Self>;
}

impl ExactRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_elem(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, other: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }
}

/// Determinant by Bareiss elimination with row pivoting. `rows` must be square
/// and non-empty; `unit` supplies the ring's one for the empty/degenerate cases.
pub fn bareiss_det<R: ExactRing>(mut m: Vec<Vec<R>>, unit: &R) -> R {
    let n = m.len();
    if n == 0 {
        return unit.one_like();
    }
    let mut sign_flip = false;
    let mut prev = unit.one_like();
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero_elem()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return unit.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .mul_elem(&m[k][k])
                    .sub_elem(&m[i][k].mul_elem(&m[k][j]));
                m[i][j] = num
                    .div_exact_elem(&prev)
                    .expect("Bareiss division is exact in an integral domain");
            }
            m[i][k] = unit.zero_like();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg_elem()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        let one = BigInt::one();
        assert_eq!(bareiss_det(mat(&[&[2, 1], &[1, 3]]), &one), BigInt::from(5));
        assert_eq!(
            bareiss_det(mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]), &one),
            BigInt::from(-1)
        );
        assert_eq!(
            bareiss_det(mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]), &one),
            BigInt::zero()
        );
        assert_eq!(
            bareiss_det(mat(&[&[0, 0, 2], &[0, 3, 0], &[5, 0, 0]]), &one),
            BigInt::from(-30)
        );
    }
}
