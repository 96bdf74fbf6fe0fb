//! The irreducibility pipeline and self-contained, re-checkable certificates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::elimination::{eliminate_all_splits, replay, required_cases, EliminationOptions, EliminationTrace};
use crate::error::{Error, Result};
use crate::exactalg::modpoly::{degree_pattern, factor_mod_p, is_prime, DegreePattern};
use crate::exactalg::zassenhaus::{factor_over_z_detailed, LiftRecord};
use crate::exactalg::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    ModpDirect,
    ModpSieve,
    Zassenhaus,
    Elimination,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Engine::ModpDirect => "modp_direct",
            Engine::ModpSieve => "modp_sieve",
            Engine::Zassenhaus => "zassenhaus",
            Engine::Elimination => "elimination",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Irreducible,
    Reducible { factors: Vec<UniPoly> },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// The reduction modulo `prime` is irreducible.
    ModpDirect { prime: u64 },
    /// Factor degree patterns whose possible factor degrees intersect to `{0, n}`.
    ModpSieve { patterns: Vec<(u64, Vec<usize>)> },
    /// Integer factorization; `record` is absent for linear input.
    Zassenhaus { record: Option<LiftRecord> },
    /// `gcd(p, p')` is a nontrivial factor.
    RepeatedFactor,
    /// One trace per split and normalization.
    Elimination { traces: Vec<EliminationTrace> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCertificate {
    pub polynomial: UniPoly,
    pub verdict: Verdict,
    pub engine: Engine,
    pub payload: Payload,
    /// Resultant-elimination traces attached on request; advisory only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elimination: Option<Vec<EliminationTrace>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProveOptions {
    /// Primes below this are tried one by one for an irreducible reduction.
    pub direct_bound: u64,
    /// Primes below this feed the degree sieve.
    pub prime_bound: u64,
    pub attach_elimination: bool,
    pub elimination: EliminationOptions,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            direct_bound: 100,
            prime_bound: 200,
            attach_elimination: false,
            elimination: EliminationOptions::default(),
        }
    }
}

pub fn prove_irreducible(p: &UniPoly) -> Result<IrreducibilityCertificate> {
    prove_irreducible_with(p, &ProveOptions::default())
}

fn check_input(p: &UniPoly) -> Result<()> {
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
    Ok(())
}

/// Squarefree check, irreducible reduction, degree sieve, then integer
/// factorization, stopping at the first engine that decides.
pub fn prove_irreducible_with(p: &UniPoly, options: &ProveOptions) -> Result<IrreducibilityCertificate> {
    check_input(p)?;
    let mut cert = decide(p, options)?;
    if options.attach_elimination && cert.verdict == Verdict::Irreducible && p.deg() >= 2 {
        if let Ok(traces) = eliminate_all_splits(p, &options.elimination) {
            cert.elimination = Some(traces);
        }
    }
    Ok(cert)
}

fn certificate(p: &UniPoly, verdict: Verdict, engine: Engine, payload: Payload) -> IrreducibilityCertificate {
    IrreducibilityCertificate {
        polynomial: p.clone(),
        verdict,
        engine,
        payload,
        elimination: None,
    }
}

fn decide(p: &UniPoly, options: &ProveOptions) -> Result<IrreducibilityCertificate> {
    let n = p.deg();
    let g = p.gcd(&p.derivative());
    if !g.is_constant() {
        let h = p.div_exact(&g).expect("gcd divides");
        return Ok(certificate(
            p,
            Verdict::Reducible { factors: vec![g, h] },
            Engine::Zassenhaus,
            Payload::RepeatedFactor,
        ));
    }
    let lc = p.lc().unwrap();
    let good = |q: u64| !(lc % BigInt::from(q)).is_zero();
    let primes: Vec<u64> = (2..options.prime_bound).filter(|&q| is_prime(q) && good(q)).collect();
    let mut seen = Vec::with_capacity(primes.len());
    for &q in primes.iter().take_while(|&&q| q < options.direct_bound) {
        let pattern = degree_pattern(p, q)?;
        if pattern == DegreePattern::Usable(vec![n]) {
            return Ok(certificate(p, Verdict::Irreducible, Engine::ModpDirect, Payload::ModpDirect { prime: q }));
        }
        seen.push(pattern);
    }
    let mut possible: BTreeSet<usize> = (0..=n).collect();
    let mut patterns = Vec::new();
    for (i, &q) in primes.iter().enumerate() {
        let pattern = match seen.get(i) {
            Some(pattern) => pattern.clone(),
            None => degree_pattern(p, q)?,
        };
        if let DegreePattern::Usable(pattern) = pattern {
            let sums = subset_sums(&pattern);
            possible = possible.intersection(&sums).copied().collect();
            patterns.push((q, pattern));
            if possible.len() == 2 {
                return Ok(certificate(p, Verdict::Irreducible, Engine::ModpSieve, Payload::ModpSieve { patterns }));
            }
        }
    }
    let fact = factor_over_z_detailed(p)?;
    let verdict = if fact.factors.len() == 1 {
        Verdict::Irreducible
    } else {
        Verdict::Reducible {
            factors: with_exact_sign(p, fact.factors),
        }
    };
    Ok(certificate(p, verdict, Engine::Zassenhaus, Payload::Zassenhaus { record: fact.record }))
}

/// Negate the first factor if needed so the product is exactly `p`.
fn with_exact_sign(p: &UniPoly, mut factors: Vec<UniPoly>) -> Vec<UniPoly> {
    if product(&factors) != *p {
        factors[0] = -&factors[0];
    }
    factors
}

fn product(fs: &[UniPoly]) -> UniPoly {
    fs.iter().fold(UniPoly::one(), |acc, f| &acc * f)
}

/// All degrees a factor could have given the degrees of the local factors.
pub fn subset_sums(pattern: &[usize]) -> BTreeSet<usize> {
    let total: usize = pattern.iter().sum();
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in pattern {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    (0..=total).filter(|&s| reach[s]).collect()
}

/// Certificate from the elimination engine alone: irreducible when every
/// split and normalization ends in a contradiction, inconclusive otherwise.
pub fn prove_by_elimination(p: &UniPoly, options: &EliminationOptions) -> Result<IrreducibilityCertificate> {
    check_input(p)?;
    let traces = eliminate_all_splits(p, options)?;
    let verdict = if traces.iter().all(EliminationTrace::is_contradiction) {
        Verdict::Irreducible
    } else {
        Verdict::Inconclusive
    };
    Ok(certificate(p, verdict, Engine::Elimination, Payload::Elimination { traces }))
}

pub fn verify_certificate(cert: &IrreducibilityCertificate) -> bool {
    check_certificate(cert).is_ok()
}

/// Recompute the stored evidence; the error names the first mismatch.
pub fn check_certificate(cert: &IrreducibilityCertificate) -> std::result::Result<(), String> {
    let p = &cert.polynomial;
    check_input(p).map_err(|e| e.to_string())?;
    let n = p.deg();
    if let Verdict::Reducible { factors } = &cert.verdict {
        if factors.len() < 2 || factors.iter().any(|f| f.is_zero() || f.deg() == 0) {
            return Err("a reducible verdict needs at least two nonconstant factors".into());
        }
        if product(factors) != *p {
            return Err("factor product differs from the polynomial".into());
        }
    }
    match (&cert.engine, &cert.payload) {
        (Engine::ModpDirect, Payload::ModpDirect { prime }) => {
            expect_irreducible(&cert.verdict)?;
            if !is_prime(*prime) {
                return Err(format!("{prime} is not prime"));
            }
            let fs = factor_mod_p(p, *prime).map_err(|e| e.to_string())?;
            if fs.len() != 1 || fs[0].1 != 1 || fs[0].0.degree() != Some(n) {
                return Err(format!("reduction modulo {prime} is not irreducible"));
            }
        }
        (Engine::ModpSieve, Payload::ModpSieve { patterns }) => {
            expect_irreducible(&cert.verdict)?;
            let mut possible: BTreeSet<usize> = (0..=n).collect();
            for (q, pattern) in patterns {
                if !is_prime(*q) {
                    return Err(format!("{q} is not prime"));
                }
                let fresh = degree_pattern(p, *q).map_err(|e| e.to_string())?;
                if fresh != DegreePattern::Usable(pattern.clone()) {
                    return Err(format!("degree pattern modulo {q} does not replay"));
                }
                possible = possible.intersection(&subset_sums(pattern)).copied().collect();
            }
            if possible != BTreeSet::from([0, n]) {
                return Err(format!("sieve leaves factor degrees {possible:?}"));
            }
        }
        (Engine::Zassenhaus, Payload::RepeatedFactor) => {
            let Verdict::Reducible { factors } = &cert.verdict else {
                return Err("a repeated factor implies reducibility".into());
            };
            if p.is_squarefree() || factors[0] != p.gcd(&p.derivative()) {
                return Err("stored factor is not the repeated part".into());
            }
        }
        (Engine::Zassenhaus, Payload::Zassenhaus { record }) => {
            let fact = factor_over_z_detailed(p).map_err(|e| e.to_string())?;
            if &fact.record != record {
                return Err("lifting record does not replay".into());
            }
            match &cert.verdict {
                Verdict::Irreducible if fact.factors.len() == 1 => {}
                Verdict::Reducible { factors } if with_exact_sign(p, fact.factors) == *factors => {}
                _ => return Err("integer factorization does not replay".into()),
            }
        }
        (Engine::Elimination, Payload::Elimination { traces }) => {
            check_traces(p, traces)?;
            let covered: BTreeSet<_> = traces.iter().map(|t| (t.split, t.normalization)).collect();
            let complete = required_cases(n).into_iter().all(|c| covered.contains(&c));
            let all_refuted = traces.iter().all(EliminationTrace::is_contradiction);
            match cert.verdict {
                Verdict::Irreducible if complete && all_refuted => {}
                Verdict::Inconclusive if !(complete && all_refuted) => {}
                _ => return Err("elimination verdict does not follow from the traces".into()),
            }
        }
        _ => return Err("engine and payload disagree".into()),
    }
    if let Some(traces) = &cert.elimination {
        check_traces(p, traces)?;
    }
    Ok(())
}

fn expect_irreducible(v: &Verdict) -> std::result::Result<(), String> {
    match v {
        Verdict::Irreducible => Ok(()),
        _ => Err("engine only certifies irreducibility".into()),
    }
}

fn check_traces(p: &UniPoly, traces: &[EliminationTrace]) -> std::result::Result<(), String> {
    for t in traces {
        replay(p, t).map_err(|e| format!("split {:?} {:?}: {e}", t.split, t.normalization))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn cubic_is_irreducible_mod_three() {
        let c = prove_irreducible(&up(&[-1, -1, -1, 1])).unwrap();
        assert_eq!(c.verdict, Verdict::Irreducible);
        assert_eq!(c.engine, Engine::ModpDirect);
        assert_eq!(c.payload, Payload::ModpDirect { prime: 3 });
        assert!(verify_certificate(&c));
    }

    #[test]
    fn reducible_cubic() {
        let p = &up(&[-1, 1]) * &up(&[1, 0, 1]);
        let c = prove_irreducible(&p).unwrap();
        assert_eq!(c.verdict, Verdict::Reducible { factors: vec![up(&[-1, 1]), up(&[1, 0, 1])] });
        assert!(verify_certificate(&c));
        let mut bad = c.clone();
        bad.verdict = Verdict::Reducible { factors: vec![up(&[-1, 1])] };
        assert!(!verify_certificate(&bad));
    }

    #[test]
    fn repeated_factor() {
        let p = &up(&[1, 1]) * &up(&[1, 1]);
        let c = prove_irreducible(&(&p * &up(&[-2, 0, 1]))).unwrap();
        assert_eq!(c.payload, Payload::RepeatedFactor);
        assert!(verify_certificate(&c));
    }

    #[test]
    fn sieve_and_zassenhaus_paths() {
        // x^4 - 10x^2 + 1 is reducible modulo every prime, so only the integer engine decides.
        let p = up(&[1, 0, -10, 0, 1]);
        let c = prove_irreducible(&p).unwrap();
        assert_eq!(c.verdict, Verdict::Irreducible);
        assert_eq!(c.engine, Engine::Zassenhaus);
        assert!(verify_certificate(&c));
        let sums = subset_sums(&[1, 2, 2]);
        assert_eq!(sums, BTreeSet::from([0, 1, 2, 3, 4, 5]));
    }

    #[test]
    fn elimination_certificate() {
        let p = up(&[-1, 0, -1, -1, 0, 1]);
        let c = prove_by_elimination(&p, &EliminationOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Irreducible);
        assert!(verify_certificate(&c));
        let mut dropped = c.clone();
        if let Payload::Elimination { traces } = &mut dropped.payload {
            traces.pop();
        }
        assert!(!verify_certificate(&dropped));
    }

    #[test]
    fn input_errors() {
        assert_eq!(prove_irreducible(&UniPoly::zero()), Err(Error::ZeroPolynomial));
        assert!(matches!(prove_irreducible(&up(&[2, 4])), Err(Error::NotPrimitive(_))));
    }
}
