//! Sparse multivariate polynomials over the integers.
//!
//! Terms are keyed by exponent vectors over a fixed, ordered variable list and
//! kept in lexicographic order (the first declared variable is most
//! significant). The order only affects iteration and printing.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linalg::ExactRing;
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl MultiPoly {
    pub fn zero(vars: Arc<Vec<String>>) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<Vec<String>>, c: BigInt) -> Self {
        let n = vars.len();
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: Arc<Vec<String>>, name: &str) -> Result<Self> {
        let idx = index_of(&vars, name)?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, BigInt::one());
        Ok(p)
    }

    pub fn from_terms<I>(vars: Arc<Vec<String>>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let n = vars.len();
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length must match variable count");
            p.add_term(e, c);
        }
        p
    }

    /// Shared variable list built from names.
    pub fn var_list<S: AsRef<str>>(names: &[S]) -> Arc<Vec<String>> {
        Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        index_of(&self.vars, name)
    }

    /// Terms in canonical (lexicographically descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|e| e[idx]).max().unwrap_or(0)
    }

    pub fn contains_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|e| e[idx] > 0)
    }

    /// Indices of variables that actually occur.
    pub fn present_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.contains_var(i))
            .collect()
    }

    /// Constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficients with respect to variable `idx`: entry `d` multiplies `v^d`.
    pub fn coefficients_in(&self, idx: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![Self::zero(self.vars.clone()); deg + 1];
        for (e, c) in &self.terms {
            let d = e[idx] as usize;
            let mut e2 = e.clone();
            e2[idx] = 0;
            out[d].add_term(e2, c.clone());
        }
        out
    }

    /// Replace variable `idx` by an integer value.
    pub fn substitute(&self, idx: usize, value: &BigInt) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::take(&mut e2[idx]);
            out.add_term(e2, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// Evaluate with every occurring variable assigned; `None` if one is missing.
    pub fn evaluate(&self, values: &[(usize, BigInt)]) -> Option<BigInt> {
        let mut p = self.clone();
        for (idx, v) in values {
            p = p.substitute(*idx, v);
        }
        p.as_constant()
    }

    /// Reduce modulo `v^2 = 1` for each listed variable index.
    pub fn reduce_units(&self, unit_idx: &[usize]) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            for &i in unit_idx {
                e2[i] %= 2;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Rename variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e2 = vec![0; e.len()];
            for (i, &x) in e.iter().enumerate() {
                e2[perm[i]] = x;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// `self` or `-self`, whichever has a positive leading coefficient.
    pub fn sign_normalized(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Exact quotient by `d` (lexicographic division), or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (lt_e, lt_c) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.vars.clone());
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if e.iter().zip(lt_e).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, r) = c.div_rem(lt_c);
            if !r.is_zero() {
                return None;
            }
            let qe: Exponents = e.iter().zip(lt_e).map(|(a, b)| a - b).collect();
            for (de, dc) in &d.terms {
                let te: Exponents = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(dc * &qc));
            }
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// Parse an expression like `a2*b0^2 + b0 - b1^2` or `4 - 4*b0*b2`.
    pub fn parse(vars: Arc<Vec<String>>, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut pieces = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices().skip(1) {
            if ch == '+' || ch == '-' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        let mut out = Self::zero(vars.clone());
        for piece in pieces {
            let (neg, body) = match piece.as_bytes()[0] {
                b'-' => (true, &piece[1..]),
                b'+' => (false, &piece[1..]),
                _ => (false, piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let mut coef = BigInt::one();
            let mut e = vec![0u32; vars.len()];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{s}`")));
                }
                if factor.as_bytes()[0].is_ascii_digit() {
                    coef *= factor
                        .parse::<BigInt>()
                        .map_err(|err| Error::Parse(format!("`{factor}`: {err}")))?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, x)) => (
                        n,
                        x.parse::<u32>()
                            .map_err(|err| Error::Parse(format!("`{factor}`: {err}")))?,
                    ),
                    None => (factor, 1),
                };
                e[index_of(&vars, name)?] += exp;
            }
            out.add_term(e, if neg { -coef } else { coef });
        }
        Ok(out)
    }

    /// Wire form: `;`-separated terms `coef:var^exp*var^exp` (a bare `coef` for
    /// the constant term), canonical order, `0` for the zero polynomial.
    pub fn to_wire(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(e, c)| {
                let mono = monomial_text(&self.vars, e, "^", "*");
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}:{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn from_wire(vars: Arc<Vec<String>>, s: &str) -> Result<Self> {
        let mut out = Self::zero(vars.clone());
        if s.trim() == "0" {
            return Ok(out);
        }
        for term in s.split(';') {
            let (coef, mono) = match term.split_once(':') {
                Some((c, m)) => (c, m),
                None => (term, ""),
            };
            let c: BigInt = coef
                .trim()
                .parse()
                .map_err(|err| Error::Parse(format!("coefficient `{coef}`: {err}")))?;
            let mut e = vec![0u32; vars.len()];
            for factor in mono.split('*').filter(|f| !f.is_empty()) {
                let (name, exp) = match factor.split_once('^') {
                    Some((n, x)) => (
                        n,
                        x.parse::<u32>()
                            .map_err(|err| Error::Parse(format!("`{factor}`: {err}")))?,
                    ),
                    None => (factor, 1),
                };
                e[index_of(&vars, name.trim())?] += exp;
            }
            out.add_term(e, c);
        }
        Ok(out)
    }
}

fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| Error::UnknownVariable(name.to_string()))
}

fn monomial_text(vars: &[String], e: &[u32], pow: &str, times: &str) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(i, &x)| {
            if x == 1 {
                vars[i].clone()
            } else {
                format!("{}{pow}{x}", vars[i])
            }
        })
        .collect::<Vec<_>>()
        .join(times)
}

fn combine(a: &MultiPoly, b: &MultiPoly, negate: bool) -> MultiPoly {
    assert_eq!(a.vars, b.vars, "operands must share a variable list");
    let mut out = a.clone();
    for (e, c) in &b.terms {
        out.add_term(e.clone(), if negate { -c } else { c.clone() });
    }
    out
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, false)
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        combine(self, rhs, true)
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "operands must share a variable list");
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigInt::one())
    }
}

impl ExactRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.vars.clone())
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(self.vars.clone(), BigInt::one())
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
        self.div_exact(other)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let mono = monomial_text(&self.vars, e, "^", "*");
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}
