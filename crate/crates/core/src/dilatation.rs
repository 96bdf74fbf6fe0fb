//! Dilatations as certified real roots, Perron cross-checks, algebraic-degree
//! certificates, and a search over words in the twist/rotation semigroup.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::sturm::{count_with, sturm_sequence, variations_at, variations_at_infinity};
use crate::exactalg::UniPoly;
use crate::irreducibility::{check_certificate, prove_irreducible_with, IrreducibilityCertificate, ProveOptions, Verdict};
use crate::penner::{char_poly, ls_polynomial, word_matrix, IntMatrix, Letter, MappingClassWord};
use crate::surface::intersection_graph;

/// A real root pinned between rational endpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootApprox {
    /// Midpoint of the interval, rounded to `f64`.
    pub value: f64,
    /// The root lies in `(lo, hi)`, or equals both when `lo == hi`.
    #[serde(with = "crate::wire::rational")]
    pub lo: BigRational,
    #[serde(with = "crate::wire::rational")]
    pub hi: BigRational,
    #[serde(with = "crate::wire::rational")]
    pub tolerance: BigRational,
}

impl RootApprox {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// `true` if `x` is within `slack` of the interval.
    pub fn near(&self, x: f64, slack: f64) -> bool {
        let lo = self.lo.to_f64().unwrap_or(f64::NEG_INFINITY);
        let hi = self.hi.to_f64().unwrap_or(f64::INFINITY);
        lo - slack <= x && x <= hi + slack
    }
}

fn dyadic_bound(p: &UniPoly) -> BigRational {
    // Cauchy: every root has |z| < 1 + max |c_i / lc|.
    let lc = p.lc().unwrap().abs();
    let max = p.coeffs()[..p.deg()]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    let bound = BigRational::new(max, lc) + BigRational::one();
    let mut b = BigRational::one();
    while b <= bound {
        b *= BigRational::from_integer(BigInt::from(2));
    }
    b
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn approx(lo: BigRational, hi: BigRational, tol: &BigRational) -> RootApprox {
    let mid = (&lo + &hi) * half();
    RootApprox {
        value: mid.to_f64().unwrap_or(f64::NAN),
        lo,
        hi,
        tolerance: tol.clone(),
    }
}

/// Isolate the largest real root with Sturm counts, then bisect by sign to
/// width at most `tol`. A root hit exactly yields a degenerate interval.
pub fn largest_real_root(p: &UniPoly, tol: &BigRational) -> Result<RootApprox> {
    if !tol.is_positive() {
        return Err(Error::NonPositiveTolerance);
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Err(Error::NoRealRoots);
    }
    let q = p.squarefree_part();
    let seq = sturm_sequence(&q);
    let bound = dyadic_bound(&q);
    let mut lo = -bound.clone();
    let mut hi = bound;
    if count_with(&seq, &lo, &hi) == 0 {
        return Err(Error::NoRealRoots);
    }
    // Narrow until (lo, hi] holds exactly one root, the rightmost.
    while count_with(&seq, &lo, &hi) > 1 {
        let mid = (&lo + &hi) * half();
        if q.sign_at(&mid) == Ordering::Equal {
            let delta = isolating_radius(&q, &seq, &mid, &(&hi - &lo));
            let right = &mid + &delta;
            if count_with(&seq, &right, &hi) == 0 {
                return Ok(approx(mid.clone(), mid, tol));
            }
            lo = right;
        } else if count_with(&seq, &mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s_hi = q.sign_at(&hi);
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) * half();
        match q.sign_at(&mid) {
            Ordering::Equal => return Ok(approx(mid.clone(), mid, tol)),
            s if s == s_hi => hi = mid,
            _ => lo = mid,
        }
    }
    Ok(approx(lo, hi, tol))
}

/// Re-check that `root` brackets the largest real root of `p` to within its
/// stated tolerance.
pub fn check_root(p: &UniPoly, root: &RootApprox) -> std::result::Result<(), String> {
    if p.is_zero() || p.deg() == 0 {
        return Err("polynomial has no roots".into());
    }
    if !root.tolerance.is_positive() || root.lo > root.hi || root.width() > root.tolerance {
        return Err(format!("interval [{}, {}] is not within tolerance {}", root.lo, root.hi, root.tolerance));
    }
    let q = p.squarefree_part();
    let above = |f: &UniPoly, x: &BigRational| {
        let seq = sturm_sequence(f);
        variations_at(&seq, x) - variations_at_infinity(&seq, true)
    };
    if root.is_exact() {
        let r = &root.lo;
        let linear = UniPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        let rest = q.div_exact(&linear).ok_or_else(|| format!("{r} is not a root"))?;
        if rest.deg() > 0 && above(&rest, r) != 0 {
            return Err(format!("there are roots above {r}"));
        }
    } else {
        if q.sign_at(&root.lo) == Ordering::Equal || q.sign_at(&root.hi) == Ordering::Equal {
            return Err("an endpoint is a root".into());
        }
        let seq = sturm_sequence(&q);
        if count_with(&seq, &root.lo, &root.hi) != 1 {
            return Err("interval does not isolate one root".into());
        }
        if above(&q, &root.hi) != 0 {
            return Err(format!("there are roots above {}", root.hi));
        }
    }
    if !root.near(root.value, 1e-9 * root.value.abs().max(1.0)) {
        return Err(format!("value {} lies outside the interval", root.value));
    }
    Ok(())
}

/// A dyadic `delta` with `root` the only root in `[root - delta, root + delta]`,
/// neither endpoint a root. Starts from `width / 2^40` and halves.
fn isolating_radius(q: &UniPoly, seq: &[UniPoly], root: &BigRational, width: &BigRational) -> BigRational {
    let mut delta = width / BigRational::from_integer(BigInt::one() << 40);
    loop {
        let (a, b) = (root - &delta, root + &delta);
        if q.sign_at(&a) != Ordering::Equal
            && q.sign_at(&b) != Ordering::Equal
            && count_with(seq, &a, &b) == 1
        {
            return delta;
        }
        delta *= half();
    }
}

/// Perron root estimate for a nonnegative matrix by power iteration, with the
/// Collatz-Wielandt bracket `min (Mx)_i/x_i <= rho <= max (Mx)_i/x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronEstimate {
    /// Rayleigh quotient `x.Mx / x.x` of the final iterate.
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

pub fn perron_estimate(m: &IntMatrix, rel_width: f64, max_iterations: usize) -> PerronEstimate {
    let rows: Vec<Vec<(usize, f64)>> = m
        .to_f64_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .enumerate()
                .filter(|(_, x)| *x != 0.0)
                .collect()
        })
        .collect();
    let n = rows.len();
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut out = PerronEstimate {
        estimate: 0.0,
        lower: 0.0,
        upper: f64::INFINITY,
        iterations: 0,
    };
    for it in 1..=max_iterations {
        for (yi, row) in y.iter_mut().zip(&rows) {
            *yi = row.iter().map(|&(j, a)| a * x[j]).sum();
        }
        let (mut lower, mut upper) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = y[i] / x[i];
            lower = lower.min(r);
            upper = upper.max(r);
        }
        let xy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let xx: f64 = x.iter().map(|a| a * a).sum();
        out = PerronEstimate {
            estimate: xy / xx,
            lower,
            upper,
            iterations: it,
        };
        if upper - lower <= rel_width * upper {
            break;
        }
        let scale = y.iter().cloned().fold(0.0f64, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
    }
    out
}

/// Slack for floating-point rounding in the Perron bracket.
pub const PERRON_FP_SLACK: f64 = 1e-12;
const PERRON_REL_WIDTH: f64 = 1e-11;
const PERRON_MAX_ITERATIONS: usize = 5_000_000;

/// Power iteration on the matrix of `r . T1`, compared with a certified root:
/// the estimate must lie within `tol + bracket width + fp slack` of the interval.
pub fn perron_cross_check(k: usize, root: &RootApprox) -> Result<PerronEstimate> {
    let m = word_matrix(&MappingClassWord::phi(k)?)?;
    let est = perron_estimate(&m, PERRON_REL_WIDTH, PERRON_MAX_ITERATIONS);
    let tol = root.tolerance.to_f64().unwrap_or(0.0);
    let slack = tol + (est.upper - est.lower) + PERRON_FP_SLACK;
    if !root.near(est.estimate, slack) {
        return Err(Error::RepresentationMismatch(format!(
            "k={k}: power iteration gives {} (bracket [{}, {}]) but the root lies in [{}, {}]",
            est.estimate, est.lower, est.upper, root.lo, root.hi
        )));
    }
    Ok(est)
}

/// The dilatation of `r . T1` for genus `2k`, cross-checked by power iteration.
pub fn dilatation_of_phi(k: usize, tol: &BigRational) -> Result<RootApprox> {
    let root = largest_real_root(&ls_polynomial(k)?, tol)?;
    perron_cross_check(k, &root)?;
    Ok(root)
}

/// Whether the next member of the family has a strictly smaller largest root,
/// decided by the sign of `p_{k+1}` at the lower endpoint for `k`: the
/// polynomial has exactly one positive root and is eventually positive.
pub fn next_is_smaller(k: usize, root_k: &RootApprox) -> Result<bool> {
    let next = ls_polynomial(k + 1)?;
    let seq = sturm_sequence(&next);
    let positive_roots = count_with(&seq, &BigRational::zero(), &dyadic_bound(&next));
    if positive_roots != 1 {
        return Err(Error::Inconsistent(format!(
            "x^{0}-x^{1}-x^{2}-1 has {positive_roots} positive roots",
            2 * k + 1,
            k + 1,
            k
        )));
    }
    Ok(next.sign_at(&root_k.lo) == Ordering::Greater)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityCertificate {
    pub k: usize,
    pub polynomial: UniPoly,
    pub irreducibility: IrreducibilityCertificate,
    /// Degree of the minimal polynomial of the dilatation.
    pub degree: usize,
    /// `dim H_1(N_{2k}; R) = 2k - 1`.
    pub homology_dim: usize,
}

pub fn verify_maximality(k: usize) -> Result<MaximalityCertificate> {
    verify_maximality_with(k, &ProveOptions::default())
}

/// Certify that the dilatation has algebraic degree `2k-1`, the first Betti
/// number of the genus-`2k` nonorientable surface.
pub fn verify_maximality_with(k: usize, options: &ProveOptions) -> Result<MaximalityCertificate> {
    let p = ls_polynomial(k)?;
    let irr = prove_irreducible_with(&p, options)?;
    match &irr.verdict {
        Verdict::Irreducible => {}
        Verdict::Reducible { factors } => {
            let shown: Vec<String> = factors.iter().map(UniPoly::to_string).collect();
            return Err(Error::TheoremContradiction(format!(
                "{p} factors as {}",
                shown.join(" * ")
            )));
        }
        Verdict::Inconclusive => {
            return Err(Error::Inconsistent(format!("pipeline was inconclusive for {p}")));
        }
    }
    Ok(MaximalityCertificate {
        k,
        degree: p.deg(),
        polynomial: p,
        irreducibility: irr,
        homology_dim: 2 * k - 1,
    })
}

pub fn check_maximality(cert: &MaximalityCertificate) -> std::result::Result<(), String> {
    let k = cert.k;
    let p = ls_polynomial(k).map_err(|e| e.to_string())?;
    if cert.polynomial != p || cert.irreducibility.polynomial != p {
        return Err("certificate is about a different polynomial".into());
    }
    if cert.degree != p.deg() || cert.degree != 2 * k - 1 || cert.homology_dim != 2 * k - 1 {
        return Err(format!(
            "degree {} and homology dimension {} must both equal {}",
            cert.degree,
            cert.homology_dim,
            2 * k - 1
        ));
    }
    if cert.irreducibility.verdict != Verdict::Irreducible {
        return Err("embedded verdict is not irreducible".into());
    }
    check_certificate(&cert.irreducibility)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub word: MappingClassWord,
    pub char_poly: UniPoly,
    pub dilatation: RootApprox,
}

/// Lexicographically least rewriting of a twist word under commutation of
/// twists along disjoint curves.
fn trace_normal_form(word: &[usize], adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut rest = word.to_vec();
    let mut out = Vec::with_capacity(word.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for p in 0..rest.len() {
            let free = rest[..p].iter().all(|&q| q == rest[p] || !adjacent(q, rest[p]));
            if free && best.is_none_or(|b| rest[p] < rest[b]) {
                best = Some(p);
            }
        }
        let p = best.expect("the first letter is always free");
        out.push(rest.remove(p));
    }
    out
}

/// Canonical twist word up to commutation and conjugation by the rotation,
/// which shifts every twist index down by one.
pub fn canonical_twists(k: usize, twists: &[usize]) -> Result<Vec<usize>> {
    let g = intersection_graph(k)?;
    let n = g.n;
    let adjacent = |i: usize, j: usize| g.adjacent(i, j);
    Ok((0..n)
        .map(|s| {
            let shifted: Vec<usize> = twists.iter().map(|&i| (i - 1 + s) % n + 1).collect();
            trace_normal_form(&shifted, &adjacent)
        })
        .min()
        .unwrap_or_default())
}

fn word_from(k: usize, rotations: usize, twists: &[usize]) -> Result<MappingClassWord> {
    let letters = std::iter::repeat_n(Letter::Rotation, rotations)
        .chain(twists.iter().map(|&i| Letter::Twist(i)))
        .collect();
    MappingClassWord::new(k, letters)
}

/// Spectral radius of the word matrix, or `None` when it is 1.
pub fn word_dilatation(word: &MappingClassWord, tol: &BigRational) -> Result<Option<(UniPoly, RootApprox)>> {
    let cp = char_poly(&word_matrix(word)?);
    let mut q = cp.squarefree_part();
    let x_minus_one = UniPoly::from_i64s(&[-1, 1]);
    while q.deg() > 0 && q.eval(&BigInt::one()).is_zero() {
        q = q.div_exact(&x_minus_one).expect("1 is a root");
    }
    if q.deg() == 0 {
        return Ok(None);
    }
    let seq = sturm_sequence(&q);
    if count_with(&seq, &BigRational::one(), &dyadic_bound(&q)) == 0 {
        return Ok(None);
    }
    Ok(Some((cp, largest_real_root(&q, tol)?)))
}

/// Words `r^j . W` with `W` a positive twist word of length at most `max_len`,
/// one per class under commutation and rotation conjugacy, with spectral
/// radius above 1, sorted by that radius.
pub fn search_family(k: usize, max_len: usize, tol: &BigRational) -> Result<Vec<SearchHit>> {
    let n = 2 * k - 1;
    intersection_graph(k)?;
    let mut classes: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut twists: Vec<usize> = Vec::new();
    for len in 0..=max_len {
        twists.clear();
        twists.resize(len, 1);
        loop {
            let canon = canonical_twists(k, &twists)?;
            for j in 0..n {
                classes.insert((j, canon.clone()));
            }
            // Odometer over {1..n}^len.
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if twists[i] < n {
                    twists[i] += 1;
                    break;
                }
                twists[i] = 1;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if len == 0 || i == usize::MAX {
                break;
            }
        }
    }
    let classes: Vec<(usize, Vec<usize>)> = classes.into_iter().collect();
    let hits: Vec<Option<SearchHit>> = classes
        .par_iter()
        .map(|(j, w)| {
            let word = word_from(k, *j, w)?;
            Ok(word_dilatation(&word, tol)?.map(|(char_poly, dilatation)| SearchHit {
                word,
                char_poly,
                dilatation,
            }))
        })
        .collect::<Result<_>>()?;
    let mut hits: Vec<SearchHit> = hits.into_iter().flatten().collect();
    hits.sort_by(|a, b| {
        a.dilatation
            .lo
            .cmp(&b.dilatation.lo)
            .then_with(|| a.word.to_string().cmp(&b.word.to_string()))
    });
    Ok(hits)
}
