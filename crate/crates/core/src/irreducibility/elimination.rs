//! Refuting hypothetical factorizations by repeated resultants.
//!
//! Suppose a monic `p` of degree `n` with constant term `+-1` factors as
//! `(a_0 + ... + a_l x^l)(b_0 + ... + b_m x^m)` with both factors monic. Then
//! `a_0 b_0 = p(0)` forces `a_0 = +-1`, which gives two normalizations:
//!
//! * [`Normalization::SubstituteA`]: `a_0 = a_l = 1` are substituted and
//!   `b_0, b_m` stay symbolic, pinned to `p(0)` and `1`;
//! * [`Normalization::SubstituteB`]: `b_0 = -p(0)`, `b_m = 1` are substituted
//!   and `a_0, a_l` stay symbolic, pinned to `-1` and `1`.
//!
//! The symbolic end coefficients satisfy `v^2 = 1`, applied after every step.
//! Interior coefficients are eliminated by resultants, always paired with the
//! mirrored resultant under `a_s <-> a_{l-s}`, `b_t <-> b_{m-t}`, until a
//! relation in the end coefficients alone fails at the pinned values.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::resultant::resultant_multi_idx;
use crate::exactalg::{MultiPoly, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    SubstituteA,
    SubstituteB,
}

impl Normalization {
    pub const ALL: [Normalization; 2] = [Normalization::SubstituteA, Normalization::SubstituteB];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSystem {
    pub l: usize,
    pub m: usize,
    pub normalization: Normalization,
    pub vars: Vec<String>,
    /// `equations[i]` is the coefficient of `x^i` in `A*B - p`.
    pub equations: Vec<MultiPoly>,
    /// Symbolic end coefficients, each satisfying `v^2 = 1`.
    pub units: Vec<String>,
    /// Values the end coefficients must take.
    pub pins: Vec<(String, i64)>,
}

fn var_names(l: usize, m: usize) -> Vec<String> {
    (0..=l)
        .map(|s| format!("a{s}"))
        .chain((0..=m).map(|t| format!("b{t}")))
        .collect()
}

fn unit_constant(p: &UniPoly) -> Result<i64> {
    let c0 = p.coeff(0);
    if !p.is_monic() || !(c0 == BigInt::from(1) || c0 == BigInt::from(-1)) {
        return Err(Error::NotUnitMonic);
    }
    Ok(if c0 == BigInt::from(1) { 1 } else { -1 })
}

/// Coefficient-matching equations for a factorization into degrees `l` and `deg p - l`.
pub fn coefficient_system(p: &UniPoly, l: usize, normalization: Normalization) -> Result<CoefficientSystem> {
    let c0 = unit_constant(p)?;
    let n = p.deg();
    if l == 0 || l >= n {
        return Err(Error::SplitOutOfRange { l, degree: n });
    }
    let m = n - l;
    let names = var_names(l, m);
    let vars = Arc::new(names.clone());
    let var = |name: &str| MultiPoly::var(vars.clone(), name).expect("declared variable");
    let constant = |c: i64| MultiPoly::constant(vars.clone(), BigInt::from(c));
    let a_name = |s: usize| format!("a{s}");
    let b_name = |t: usize| format!("b{t}");
    let (a, b, units, pins): (Vec<MultiPoly>, Vec<MultiPoly>, Vec<String>, Vec<(String, i64)>) =
        match normalization {
            Normalization::SubstituteA => (
                (0..=l)
                    .map(|s| if s == 0 || s == l { constant(1) } else { var(&a_name(s)) })
                    .collect(),
                (0..=m).map(|t| var(&b_name(t))).collect(),
                vec![b_name(0), b_name(m)],
                vec![(b_name(0), c0), (b_name(m), 1)],
            ),
            Normalization::SubstituteB => (
                (0..=l).map(|s| var(&a_name(s))).collect(),
                (0..=m)
                    .map(|t| match t {
                        0 => constant(-c0),
                        t if t == m => constant(1),
                        t => var(&b_name(t)),
                    })
                    .collect(),
                vec![a_name(0), a_name(l)],
                vec![(a_name(0), -1), (a_name(l), 1)],
            ),
        };
    let unit_idx: Vec<usize> = units.iter().map(|u| index(&names, u)).collect();
    let equations = (0..=n)
        .map(|i| {
            let mut e = MultiPoly::constant(vars.clone(), -p.coeff(i));
            for s in i.saturating_sub(m)..=i.min(l) {
                e = &e + &(&a[s] * &b[i - s]);
            }
            e.reduce_units(&unit_idx)
        })
        .collect();
    Ok(CoefficientSystem {
        l,
        m,
        normalization,
        vars: names,
        equations,
        units,
        pins,
    })
}

fn index(names: &[String], name: &str) -> usize {
    names.iter().position(|v| v == name).expect("declared variable")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationStep {
    /// Equation number of the result; initial equations are `0..=n`.
    pub id: usize,
    pub variable: String,
    pub operands: (usize, usize),
    /// `res_variable(operands.0, operands.1)` before unit reduction.
    pub resultant: MultiPoly,
    /// The resultant reduced modulo the unit relations.
    pub result: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Equation number of the refuted relation.
    pub equation: usize,
    /// A relation free of interior coefficients.
    pub relation: MultiPoly,
    /// Content of the relation.
    #[serde(with = "crate::wire::bigint")]
    pub eta: BigInt,
    /// Value of the relation at the pinned end coefficients; nonzero.
    #[serde(with = "crate::wire::bigint")]
    pub value_at_pins: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Contradiction(Witness),
    Exhausted { reason: String, resultants_computed: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub split: (usize, usize),
    pub normalization: Normalization,
    pub vars: Vec<String>,
    pub equations: Vec<MultiPoly>,
    pub units: Vec<String>,
    pub pins: Vec<(String, i64)>,
    pub steps: Vec<EliminationStep>,
    pub outcome: Outcome,
}

impl EliminationTrace {
    pub fn initial(system: &CoefficientSystem) -> Self {
        EliminationTrace {
            split: (system.l, system.m),
            normalization: system.normalization,
            vars: system.vars.clone(),
            equations: system.equations.clone(),
            units: system.units.clone(),
            pins: system.pins.clone(),
            steps: Vec::new(),
            outcome: Outcome::Exhausted {
                reason: "not started".into(),
                resultants_computed: 0,
            },
        }
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self.outcome, Outcome::Contradiction(_))
    }

    pub fn degree(&self) -> usize {
        self.split.0 + self.split.1
    }

    /// Every equation of the trace by number: initial ones, then step results.
    pub fn equation(&self, id: usize) -> Option<&MultiPoly> {
        let n = self.degree();
        if id <= n {
            self.equations.get(id)
        } else {
            self.steps.get(id - n - 1).map(|s| &s.result)
        }
    }

    pub fn step(&self, id: usize) -> Option<&EliminationStep> {
        let n = self.degree();
        id.checked_sub(n + 1).and_then(|i| self.steps.get(i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationOptions {
    /// Maximum number of resultants computed per split and normalization.
    pub budget: usize,
    /// Largest Sylvester matrix attempted.
    pub max_sylvester_dim: usize,
    /// Operands with more terms than this are not combined.
    pub max_terms: usize,
    /// Skip a resultant when `terms(p)^deg_v(q) * terms(q)^deg_v(p)`, a bound on
    /// the monomials of a Sylvester expansion term, exceeds this.
    pub max_work: u64,
    /// Stop once this many new equations have been derived.
    pub max_steps: usize,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        EliminationOptions {
            budget: 10_000,
            max_sylvester_dim: 8,
            max_terms: 400,
            max_work: 20_000,
            max_steps: 300,
        }
    }
}

/// Variable bookkeeping shared by the search and by replay.
struct Layout {
    l: usize,
    m: usize,
    vars: Arc<Vec<String>>,
    unit_idx: Vec<usize>,
    interior_mask: u128,
    self_mirror_mask: u128,
    mirror: Vec<usize>,
    pins: Vec<(usize, BigInt)>,
}

impl Layout {
    fn new(trace: &EliminationTrace) -> Result<Self> {
        let (l, m) = trace.split;
        if trace.vars != var_names(l, m) || trace.equations.len() != l + m + 1 {
            return Err(Error::Inconsistent("trace layout does not match its split".into()));
        }
        if trace.vars.len() > 128 {
            return Err(Error::Inconsistent("too many coefficients for the elimination engine".into()));
        }
        let names = &trace.vars;
        let a = |s: usize| s;
        let b = |t: usize| l + 1 + t;
        let mut interior_mask = 0u128;
        for s in 1..l {
            interior_mask |= 1 << a(s);
        }
        for t in 1..m {
            interior_mask |= 1 << b(t);
        }
        let mut self_mirror_mask = 0u128;
        if l % 2 == 0 && l >= 2 {
            self_mirror_mask |= 1 << a(l / 2);
        }
        if m % 2 == 0 && m >= 2 {
            self_mirror_mask |= 1 << b(m / 2);
        }
        let mut mirror = vec![0; names.len()];
        for s in 0..=l {
            mirror[a(s)] = a(l - s);
        }
        for t in 0..=m {
            mirror[b(t)] = b(m - t);
        }
        let unit_idx = trace.units.iter().map(|u| index(names, u)).collect();
        let pins = trace
            .pins
            .iter()
            .map(|(v, x)| (index(names, v), BigInt::from(*x)))
            .collect();
        Ok(Layout {
            l,
            m,
            vars: Arc::new(names.clone()),
            unit_idx,
            interior_mask,
            self_mirror_mask,
            mirror,
            pins,
        })
    }

    fn interior(&self, p: &MultiPoly) -> u128 {
        p.present_vars()
            .into_iter()
            .fold(0u128, |acc, i| acc | (1 << i))
            & self.interior_mask
    }

    fn at_pins(&self, p: &MultiPoly) -> Option<BigInt> {
        p.evaluate(&self.pins)
    }

    fn witness(&self, id: usize, p: &MultiPoly) -> Option<Witness> {
        if self.interior(p) != 0 {
            return None;
        }
        let value = self.at_pins(p)?;
        (!value.is_zero()).then(|| Witness {
            equation: id,
            relation: p.clone(),
            eta: p.content(),
            value_at_pins: value,
        })
    }
}

type Candidate = Option<(MultiPoly, MultiPoly)>;

struct Search<'a> {
    layout: Layout,
    options: &'a EliminationOptions,
    n: usize,
    polys: Vec<MultiPoly>,
    interior: Vec<u128>,
    steps: Vec<EliminationStep>,
    pool: Vec<usize>,
    by_poly: HashMap<MultiPoly, usize>,
    cache: HashMap<(usize, usize, usize), Candidate>,
    computed: usize,
}

impl<'a> Search<'a> {
    fn candidate(&mut self, v: usize, x: usize, y: usize) -> Candidate {
        if let Some(c) = self.cache.get(&(v, x, y)) {
            return c.clone();
        }
        let (px, py) = (&self.polys[x], &self.polys[y]);
        let dim = (px.degree_in(v) + py.degree_in(v)) as usize;
        let work = (px.num_terms() as u64)
            .saturating_pow(py.degree_in(v))
            .saturating_mul((py.num_terms() as u64).saturating_pow(px.degree_in(v)));
        let result = if dim > self.options.max_sylvester_dim
            || px.num_terms() > self.options.max_terms
            || py.num_terms() > self.options.max_terms
            || work > self.options.max_work
        {
            None
        } else {
            self.computed += 1;
            let raw = resultant_multi_idx(px, py, v).expect("variable occurs in both operands");
            let red = raw.reduce_units(&self.layout.unit_idx);
            (!red.is_zero()).then_some((raw, red))
        };
        self.cache.insert((v, x, y), result.clone());
        result
    }

    fn is_known(&self, p: &MultiPoly) -> bool {
        self.by_poly.contains_key(&p.sign_normalized())
    }

    fn add(&mut self, v: usize, x: usize, y: usize, raw: MultiPoly, red: MultiPoly) -> Option<Witness> {
        let id = self.polys.len();
        self.steps.push(EliminationStep {
            id,
            variable: self.layout.vars[v].clone(),
            operands: (x, y),
            resultant: raw,
            result: red.clone(),
        });
        self.by_poly.insert(red.sign_normalized(), id);
        let interior = self.layout.interior(&red);
        self.interior.push(interior);
        self.polys.push(red);
        if interior == 0 {
            return self.layout.witness(id, &self.polys[id]);
        }
        self.pool.push(id);
        None
    }

    fn mirror_of(&self, id: usize) -> Option<usize> {
        let m = self.polys[id].permute_vars(&self.layout.mirror).sign_normalized();
        self.by_poly.get(&m).copied()
    }

    fn admissible(&self, v: usize, x: usize, y: usize) -> bool {
        let bit = 1u128 << v;
        if self.interior[x] & self.interior[y] & bit == 0 {
            return false;
        }
        // The self-mirror coefficients are eliminated last.
        if self.layout.self_mirror_mask & bit != 0 {
            return (self.interior[x] | self.interior[y]) & !self.layout.self_mirror_mask == 0;
        }
        true
    }

    fn best_move(&mut self) -> Option<(usize, usize, usize, MultiPoly, MultiPoly)> {
        let mut best: Option<((u32, u32, usize, usize, usize, usize), MultiPoly, MultiPoly)> = None;
        let pool = self.pool.clone();
        for (i, &x) in pool.iter().enumerate() {
            for &y in &pool[i + 1..] {
                let shared = self.interior[x] & self.interior[y];
                for v in bits(shared) {
                    if !self.admissible(v, x, y) {
                        continue;
                    }
                    if self.computed >= self.options.budget && !self.cache.contains_key(&(v, x, y)) {
                        continue;
                    }
                    let Some((raw, red)) = self.candidate(v, x, y) else {
                        continue;
                    };
                    if self.is_known(&red) {
                        continue;
                    }
                    let key = (
                        self.layout.interior(&red).count_ones(),
                        red.total_degree(),
                        red.num_terms(),
                        v,
                        x,
                        y,
                    );
                    if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                        best = Some((key, raw, red));
                    }
                }
            }
        }
        best.map(|((_, _, _, v, x, y), raw, red)| (v, x, y, raw, red))
    }

    fn run(&mut self) -> Outcome {
        loop {
            if self.steps.len() >= self.options.max_steps {
                return Outcome::Exhausted {
                    reason: "equation limit reached".into(),
                    resultants_computed: self.computed,
                };
            }
            let Some((v, x, y, raw, red)) = self.best_move() else {
                let reason = if self.computed >= self.options.budget {
                    "step budget exhausted"
                } else {
                    "no admissible resultant remains"
                };
                return Outcome::Exhausted {
                    reason: reason.into(),
                    resultants_computed: self.computed,
                };
            };
            if let Some(w) = self.add(v, x, y, raw, red) {
                return Outcome::Contradiction(w);
            }
            let sv = self.layout.mirror[v];
            if let (Some(mx), Some(my)) = (self.mirror_of(x), self.mirror_of(y)) {
                if (sv, mx, my) != (v, x, y) && mx != my && self.admissible(sv, mx, my) {
                    if let Some((raw, red)) = self.candidate(sv, mx, my) {
                        if !self.is_known(&red) {
                            if let Some(w) = self.add(sv, mx, my, raw, red) {
                                return Outcome::Contradiction(w);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Run the symmetric elimination on the trace's equations. Any steps already
/// in `trace_in` are discarded and recomputed.
pub fn eliminate(trace_in: &EliminationTrace, options: &EliminationOptions) -> Result<EliminationTrace> {
    let layout = Layout::new(trace_in)?;
    let n = layout.l + layout.m;
    let mut search = Search {
        layout,
        options,
        n,
        polys: trace_in.equations.clone(),
        interior: Vec::new(),
        steps: Vec::new(),
        pool: Vec::new(),
        by_poly: HashMap::new(),
        cache: HashMap::new(),
        computed: 0,
    };
    search.interior = search.polys.iter().map(|p| search.layout.interior(p)).collect();
    for (i, p) in search.polys.iter().enumerate() {
        search.by_poly.entry(p.sign_normalized()).or_insert(i);
    }
    let mut trace = trace_in.clone();
    // An initial equation may already refute the pins.
    for i in 1..n {
        let p = &search.polys[i];
        if let Some(w) = search.layout.witness(i, p) {
            trace.steps = Vec::new();
            trace.outcome = Outcome::Contradiction(w);
            return Ok(trace);
        }
        if search.interior[i] != 0 {
            search.pool.push(i);
        }
    }
    let outcome = search.run();
    let (steps, outcome) = match outcome {
        Outcome::Contradiction(w) => prune(search.n, search.steps, w),
        other => (search.steps, other),
    };
    trace.steps = steps;
    trace.outcome = outcome;
    Ok(trace)
}

/// Keep only the steps the witness depends on and renumber them consecutively.
fn prune(n: usize, steps: Vec<EliminationStep>, witness: Witness) -> (Vec<EliminationStep>, Outcome) {
    let mut needed = HashSet::new();
    let mut stack = vec![witness.equation];
    while let Some(id) = stack.pop() {
        if id <= n || !needed.insert(id) {
            continue;
        }
        let s = &steps[id - n - 1];
        stack.push(s.operands.0);
        stack.push(s.operands.1);
    }
    let mut renumber = BTreeMap::new();
    let mut kept = Vec::new();
    for s in steps {
        if needed.contains(&s.id) {
            let new_id = n + 1 + kept.len();
            renumber.insert(s.id, new_id);
            kept.push(s);
        }
    }
    let map = |id: usize| if id <= n { id } else { renumber[&id] };
    for s in &mut kept {
        s.id = map(s.id);
        s.operands = (map(s.operands.0), map(s.operands.1));
    }
    let witness = Witness {
        equation: map(witness.equation),
        ..witness
    };
    (kept, Outcome::Contradiction(witness))
}

/// Traces for every split with the larger factor of degree `l >= n/2`, both
/// normalizations each. Together they cover every possible factorization.
pub fn eliminate_all_splits(p: &UniPoly, options: &EliminationOptions) -> Result<Vec<EliminationTrace>> {
    use rayon::prelude::*;
    let n = p.deg();
    unit_constant(p)?;
    let jobs: Vec<(usize, Normalization)> = (n.div_ceil(2)..n)
        .rev()
        .flat_map(|l| Normalization::ALL.into_iter().map(move |c| (l, c)))
        .collect();
    jobs.into_par_iter()
        .map(|(l, c)| {
            let system = coefficient_system(p, l, c)?;
            eliminate(&EliminationTrace::initial(&system), options)
        })
        .collect()
}

/// The splits and normalizations a complete refutation must cover.
pub fn required_cases(n: usize) -> Vec<((usize, usize), Normalization)> {
    (n.div_ceil(2)..n)
        .rev()
        .flat_map(|l| Normalization::ALL.into_iter().map(move |c| ((l, n - l), c)))
        .collect()
}

/// Recompute every stored quantity of a trace. `p` is the polynomial the trace
/// claims to be about.
pub fn replay(p: &UniPoly, trace: &EliminationTrace) -> std::result::Result<(), String> {
    let (l, _) = trace.split;
    let system = coefficient_system(p, l, trace.normalization).map_err(|e| e.to_string())?;
    if system.equations != trace.equations || system.units != trace.units || system.pins != trace.pins {
        return Err("initial equations do not match the polynomial".into());
    }
    let layout = Layout::new(trace).map_err(|e| e.to_string())?;
    let n = trace.degree();
    for (i, s) in trace.steps.iter().enumerate() {
        if s.id != n + 1 + i {
            return Err(format!("step {i} has id {}, expected {}", s.id, n + 1 + i));
        }
        let (x, y) = s.operands;
        if x >= s.id || y >= s.id {
            return Err(format!("step {} uses a later equation", s.id));
        }
        let px = trace.equation(x).ok_or("missing operand")?;
        let py = trace.equation(y).ok_or("missing operand")?;
        let v = layout
            .vars
            .iter()
            .position(|name| name == &s.variable)
            .ok_or_else(|| format!("unknown variable {}", s.variable))?;
        let raw = resultant_multi_idx(px, py, v).map_err(|e| e.to_string())?;
        if raw != s.resultant {
            return Err(format!("resultant of step {} does not replay", s.id));
        }
        if raw.reduce_units(&layout.unit_idx) != s.result {
            return Err(format!("unit reduction of step {} does not replay", s.id));
        }
    }
    if let Outcome::Contradiction(w) = &trace.outcome {
        let rel = trace
            .equation(w.equation)
            .ok_or("witness refers to a missing equation")?;
        if rel != &w.relation {
            return Err("witness relation differs from the stored equation".into());
        }
        let expected = layout
            .witness(w.equation, rel)
            .ok_or("witness relation does not refute the pins")?;
        if &expected != w {
            return Err("witness values do not replay".into());
        }
    }
    Ok(())
}
