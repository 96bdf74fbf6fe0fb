//! Integer matrices of twists and the rotation, words in them, and exact
//! characteristic polynomials.
//!
//! Matrices act on column vectors of curve measures `mu_1..mu_n`, `n = 2k-1`.
//! A word is evaluated left to right as a matrix product, so `r . T1` (the map
//! `r` after `T1`) is `rotation * twist(1)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::linalg::bareiss_det;
use crate::exactalg::UniPoly;
use crate::surface::intersection_graph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    #[serde(with = "crate::wire::bigint_matrix")]
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Inconsistent("matrix must be square".into()));
        }
        Ok(IntMatrix { rows })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = BigInt::one();
        }
        IntMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim();
        assert_eq!(n, other.dim(), "dimension mismatch");
        let sparse = SparseRows::from(self);
        IntMatrix {
            rows: sparse.mul_dense(&other.rows),
        }
    }

    pub fn pow(&self, e: usize) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.dim());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim();
        IntMatrix {
            rows: (0..n)
                .map(|j| (0..n).map(|i| self.rows[i][j].clone()).collect())
                .collect(),
        }
    }

    pub fn determinant(&self) -> BigInt {
        bareiss_det(self.rows.clone(), &BigInt::one())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim()).map(|i| &self.rows[i][i]).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.rows.iter().flatten().all(|x| !x.is_negative())
    }

    /// Entries as `f64`, for numerical cross-checks only.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect())
            .collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Row-compressed copy used for products with mostly-zero matrices.
struct SparseRows {
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl From<&IntMatrix> for SparseRows {
    fn from(m: &IntMatrix) -> Self {
        SparseRows {
            rows: m
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(j, x)| (j, x.clone()))
                        .collect()
                })
                .collect(),
        }
    }
}

impl SparseRows {
    fn mul_dense(&self, b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b.len();
        self.rows
            .iter()
            .map(|row| {
                let mut out = vec![BigInt::zero(); n];
                for (j, a) in row {
                    if a.is_one() {
                        for (o, x) in out.iter_mut().zip(&b[*j]) {
                            *o += x;
                        }
                    } else {
                        for (o, x) in out.iter_mut().zip(&b[*j]) {
                            *o += a * x;
                        }
                    }
                }
                out
            })
            .collect()
    }
}

fn check_k(k: usize) -> Result<usize> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    Ok(2 * k - 1)
}

/// `I + A_i`, where row `i` of `A_i` records which curves meet `c_i`.
pub fn twist_matrix(k: usize, i: usize) -> Result<IntMatrix> {
    let n = check_k(k)?;
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let g = intersection_graph(k)?;
    let mut m = IntMatrix::identity(n);
    for j in 1..=n {
        if g.adjacent(i, j) {
            m.rows[i - 1][j - 1] = BigInt::one();
        }
    }
    Ok(m)
}

/// The cyclic permutation matrix with ones at `(m, m+1)` and `(n, 1)`.
pub fn rotation_matrix(k: usize) -> Result<IntMatrix> {
    let n = check_k(k)?;
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for (m, row) in rows.iter_mut().enumerate() {
        row[(m + 1) % n] = BigInt::one();
    }
    Ok(IntMatrix { rows })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Twist(usize),
    Rotation,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Twist(i) => write!(f, "T{i}"),
            Letter::Rotation => write!(f, "r"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MappingClassWord {
    pub k: usize,
    /// Leftmost letter is applied last.
    pub letters: Vec<Letter>,
}

impl MappingClassWord {
    pub fn new(k: usize, letters: Vec<Letter>) -> Result<Self> {
        let n = check_k(k)?;
        for l in &letters {
            if let Letter::Twist(i) = *l {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, max: n });
                }
            }
        }
        Ok(MappingClassWord { k, letters })
    }

    /// `r . T1`, the mapping class whose dilatation this crate studies.
    pub fn phi(k: usize) -> Result<Self> {
        Self::new(k, vec![Letter::Rotation, Letter::Twist(1)])
    }

    pub fn twist_length(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, Letter::Twist(_)))
            .count()
    }

    /// Parse `r.T1.T3`; `id` is the empty word.
    pub fn parse(k: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "id" || s.is_empty() {
            return Self::new(k, vec![]);
        }
        let letters = s
            .split('.')
            .map(|t| match t.trim() {
                "r" => Ok(Letter::Rotation),
                t => t
                    .strip_prefix('T')
                    .and_then(|i| usize::from_str(i).ok())
                    .map(Letter::Twist)
                    .ok_or_else(|| Error::Parse(format!("unknown letter `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, letters)
    }
}

impl fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join("."))
    }
}

pub fn letter_matrix(k: usize, letter: Letter) -> Result<IntMatrix> {
    match letter {
        Letter::Twist(i) => twist_matrix(k, i),
        Letter::Rotation => rotation_matrix(k),
    }
}

pub fn word_matrix(word: &MappingClassWord) -> Result<IntMatrix> {
    let n = check_k(word.k)?;
    let mut acc = IntMatrix::identity(n);
    for &l in &word.letters {
        acc = acc.mul(&letter_matrix(word.k, l)?);
    }
    Ok(acc)
}

/// `det(xI - M)` by the Faddeev-LeVerrier recurrence with exact division.
pub fn char_poly(m: &IntMatrix) -> UniPoly {
    let n = m.dim();
    let a = SparseRows::from(m);
    // coeffs[i] multiplies x^i.
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = a.mul_dense(&mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = a.mul_dense(&mk);
        let tr: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let (q, r) = tr.div_rem(&BigInt::from(k));
        assert!(r.is_zero(), "trace division in the characteristic polynomial recurrence must be exact");
        coeffs[n - k] = -q;
    }
    UniPoly::new(coeffs)
}

/// `x^(2k-1) - x^k - x^(k-1) - 1`.
pub fn ls_polynomial(k: usize) -> Result<UniPoly> {
    let n = check_k(k)?;
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] = BigInt::from(-1);
    c[k - 1] = BigInt::from(-1);
    c[k] = BigInt::from(-1);
    c[n] = BigInt::one();
    Ok(UniPoly::new(c))
}
