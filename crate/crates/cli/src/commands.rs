//! The subcommands. Each returns an [`Outcome`]: the rendered report and
//! whether every check in it passed.

use std::time::Instant;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use dilatation_core::dilatation::{
    check_maximality, check_root, dilatation_of_phi, search_family, verify_maximality_with,
    MaximalityCertificate, RootApprox,
};
use dilatation_core::exactalg::UniPoly;
use dilatation_core::irreducibility::{check_certificate, prove_irreducible_with, IrreducibilityCertificate, ProveOptions, Verdict};
use dilatation_core::penner::{char_poly, ls_polynomial, rotation_matrix, twist_matrix, word_matrix, IntMatrix, MappingClassWord};
use dilatation_core::surface::{build_labels, graph_from_diagram, topology_report, TopologyReport};
use dilatation_core::wire::decimal;

use crate::cache::{Cache, CacheKey};
use crate::config::{Format, RunConfig};

pub const SCHEMA_VERSION: u32 = 1;

pub const SEARCH_BANNER: &str = "exploration only: smallest dilatations among words r^j . (positive twist word); \
no minimality is claimed";

pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

#[derive(Debug)]
pub enum CommandError {
    /// Bad input discovered after flag parsing; exit code 2.
    Usage(String),
    /// Exit code 1.
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigView {
    pub ks: Vec<usize>,
    pub tol: String,
    pub prime_bound: u64,
    pub elimination: bool,
    pub max_len: usize,
    pub config_hash: String,
}

impl ConfigView {
    fn of(config: &RunConfig) -> Self {
        ConfigView {
            ks: config.ks.clone(),
            tol: config.tol.to_string(),
            prime_bound: config.prime_bound,
            elimination: config.elimination,
            max_len: config.max_len,
            config_hash: config.hash(),
        }
    }
}

fn prove_options(config: &RunConfig) -> ProveOptions {
    ProveOptions {
        prime_bound: config.prime_bound,
        direct_bound: ProveOptions::default().direct_bound.min(config.prime_bound),
        attach_elimination: config.elimination,
        ..ProveOptions::default()
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// Enough fractional digits to show an interval of width `tol`.
fn digits_for(config: &RunConfig) -> u32 {
    let mut d = 0;
    let mut scaled = config.tol.clone();
    while scaled < num_rational::BigRational::one() && d < 60 {
        scaled *= num_rational::BigRational::from_integer(10.into());
        d += 1;
    }
    d + 2
}

struct CacheHandle(Option<Cache>);

impl CacheHandle {
    fn open(config: &RunConfig) -> Self {
        let Some(dir) = &config.cache_dir else {
            return CacheHandle(None);
        };
        match Cache::open(dir) {
            Ok(Some(c)) => CacheHandle(Some(c)),
            Ok(None) => {
                eprintln!("warning: {} is locked by another run; continuing without the cache", dir.display());
                CacheHandle(None)
            }
            Err(e) => {
                eprintln!("warning: cannot use cache {}: {e}", dir.display());
                CacheHandle(None)
            }
        }
    }

    fn key(config: &RunConfig, k: usize) -> CacheKey {
        CacheKey {
            command: config.command.to_string(),
            k,
            config_hash: config.hash(),
        }
    }

    /// A cached payload that passes `valid`, or a fresh one from `compute`.
    fn get_or_compute<T, V, C>(&self, config: &RunConfig, k: usize, valid: V, compute: C) -> Result<T, String>
    where
        T: Serialize + for<'de> Deserialize<'de>,
        V: Fn(&T) -> Result<(), String>,
        C: FnOnce() -> Result<T, String>,
    {
        let key = Self::key(config, k);
        if let Some(cache) = &self.0 {
            if let Some(hit) = cache.load::<T>(&key) {
                if valid(&hit).is_ok() {
                    return Ok(hit);
                }
            }
        }
        let fresh = compute()?;
        if let Some(cache) = &self.0 {
            if let Err(e) = cache.store(&key, &fresh) {
                eprintln!("warning: cache write failed for k={k}: {e}");
            }
        }
        Ok(fresh)
    }
}

// ---------------------------------------------------------------- construct

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramView {
    pub k: usize,
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructChecks {
    pub char_poly_matches: bool,
    pub one_boundary_component: bool,
    pub nonorientable_genus_2k: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructReport {
    pub schema_version: u32,
    pub command: String,
    pub k: usize,
    pub diagram: DiagramView,
    /// Rows of the 0/1 adjacency matrix of the intersection graph.
    pub intersection_graph: Vec<Vec<u8>>,
    pub topology: TopologyReport,
    pub twist_matrices: Vec<IntMatrix>,
    pub rotation_matrix: IntMatrix,
    pub word: String,
    /// `M_k`, the matrix of `r . T1` on the curve basis.
    pub phi_matrix: IntMatrix,
    pub char_poly: UniPoly,
    pub char_poly_text: String,
    pub checks: ConstructChecks,
    pub ok: bool,
}

pub fn construct_report(k: usize) -> dilatation_core::Result<ConstructReport> {
    let diagram = build_labels(k)?;
    let graph = graph_from_diagram(&diagram)?;
    let topology = topology_report(&diagram)?;
    let n = 2 * k - 1;
    let twists = (1..=n).map(|i| twist_matrix(k, i)).collect::<dilatation_core::Result<Vec<_>>>()?;
    let word = MappingClassWord::phi(k)?;
    let phi = word_matrix(&word)?;
    let cp = char_poly(&phi);
    let checks = ConstructChecks {
        char_poly_matches: cp == ls_polynomial(k)?,
        one_boundary_component: topology.boundary_components == 1,
        nonorientable_genus_2k: !topology.orientable && topology.genus == 2 * k as i64,
    };
    let ok = checks.char_poly_matches && checks.one_boundary_component && checks.nonorientable_genus_2k;
    Ok(ConstructReport {
        schema_version: SCHEMA_VERSION,
        command: "construct".into(),
        k,
        diagram: DiagramView {
            k,
            labels: diagram.labels.clone(),
        },
        intersection_graph: graph.adjacency.clone(),
        topology,
        twist_matrices: twists,
        rotation_matrix: rotation_matrix(k)?,
        word: word.to_string(),
        phi_matrix: phi,
        char_poly_text: cp.to_string(),
        char_poly: cp,
        checks,
        ok,
    })
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}\n")).collect()
}

fn render_construct(r: &ConstructReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => csv_string(
            &["k", "labels", "boundary_components", "orientable", "genus", "char_poly", "ok"],
            vec![vec![
                r.k.to_string(),
                r.diagram.labels.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                r.topology.boundary_components.to_string(),
                r.topology.orientable.to_string(),
                r.topology.genus.to_string(),
                r.char_poly_text.clone(),
                r.ok.to_string(),
            ]],
        ),
        Format::Text => {
            let k = r.k;
            let mut s = format!("k = {k}\n");
            let labels: Vec<String> = r.diagram.labels.iter().map(usize::to_string).collect();
            s += &format!("labels: {}\n", labels.join(" "));
            s += "intersection graph:\n";
            for (v, row) in r.intersection_graph.iter().enumerate() {
                let nbrs: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(w, _)| (w + 1).to_string())
                    .collect();
                s += &format!("  c{} -- {}\n", v + 1, nbrs.join(", "));
            }
            let t = &r.topology;
            s += &format!(
                "surface: euler characteristic {}, {} boundary component(s), {}, genus {}\n",
                t.euler_characteristic,
                t.boundary_components,
                if t.orientable { "orientable" } else { "nonorientable" },
                t.genus
            );
            for (i, m) in r.twist_matrices.iter().enumerate() {
                s += &format!("T{}:\n{}", i + 1, indent(&m.to_string()));
            }
            s += &format!("r:\n{}", indent(&r.rotation_matrix.to_string()));
            s += &format!("M_{k} = {}:\n{}", r.word, indent(&r.phi_matrix.to_string()));
            s += &format!("characteristic polynomial: {}\n", r.char_poly_text);
            s += &format!(
                "checks: char poly {}, boundary {}, genus {}\n",
                pass(r.checks.char_poly_matches),
                pass(r.checks.one_boundary_component),
                pass(r.checks.nonorientable_genus_2k)
            );
            s
        }
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn construct(config: &RunConfig) -> Result<Outcome, CommandError> {
    let k = config.ks[0];
    let report = construct_report(k).map_err(|e| CommandError::Failed(format!("k={k}: {e}")))?;
    Ok(Outcome {
        output: render_construct(&report, config.format),
        ok: report.ok,
    })
}

// ------------------------------------------------------------------ certify

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyRecord {
    pub k: usize,
    pub lambda: RootApprox,
    pub maximality: MaximalityCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub k: usize,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub schema_version: u32,
    pub command: String,
    pub config: ConfigView,
    pub results: Vec<CertifyRecord>,
    pub failures: Vec<Failure>,
}

pub fn check_record(r: &CertifyRecord) -> Result<(), String> {
    if r.maximality.k != r.k {
        return Err(format!("record for k={} holds a certificate for k={}", r.k, r.maximality.k));
    }
    check_maximality(&r.maximality)?;
    let p = ls_polynomial(r.k).map_err(|e| e.to_string())?;
    check_root(&p, &r.lambda).map_err(|e| format!("dilatation interval: {e}"))
}

fn certify_one(config: &RunConfig, cache: &CacheHandle, k: usize) -> Result<CertifyRecord, String> {
    let record = cache.get_or_compute(
        config,
        k,
        |r: &CertifyRecord| {
            check_record(r)?;
            if r.lambda.tolerance != config.tol || r.maximality.irreducibility.elimination.is_some() != config.elimination {
                return Err("settings differ".into());
            }
            Ok(())
        },
        || {
            let maximality = verify_maximality_with(k, &prove_options(config)).map_err(|e| e.to_string())?;
            let lambda = dilatation_of_phi(k, &config.tol).map_err(|e| e.to_string())?;
            Ok(CertifyRecord { k, lambda, maximality })
        },
    )?;
    check_record(&record)?;
    Ok(record)
}

pub fn certify(config: &RunConfig) -> Result<Outcome, CommandError> {
    let cache = CacheHandle::open(config);
    let runs: Vec<(usize, Result<CertifyRecord, String>, u128)> = config
        .ks
        .par_iter()
        .map(|&k| {
            let start = Instant::now();
            let r = certify_one(config, &cache, k);
            (k, r, start.elapsed().as_millis())
        })
        .collect();
    let mut report = CertifyReport {
        schema_version: SCHEMA_VERSION,
        command: "certify".into(),
        config: ConfigView::of(config),
        results: Vec::new(),
        failures: Vec::new(),
    };
    let mut times = Vec::new();
    for (k, r, ms) in runs {
        match r {
            Ok(rec) => {
                report.results.push(rec);
                times.push(ms);
            }
            Err(error) => {
                eprintln!("error: k={k}: {error}");
                report.failures.push(Failure { k, error });
            }
        }
    }
    let digits = digits_for(config);
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_string(
            &["k", "lambda_lo", "lambda_hi", "degree", "engine", "wall_time_ms"],
            report
                .results
                .iter()
                .zip(&times)
                .map(|(r, ms)| {
                    vec![
                        r.k.to_string(),
                        decimal(&r.lambda.lo, digits, false),
                        decimal(&r.lambda.hi, digits, true),
                        r.maximality.degree.to_string(),
                        r.maximality.irreducibility.engine.to_string(),
                        ms.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            for r in &report.results {
                s += &format!(
                    "k={:<3} lambda in [{}, {}]  degree {} = dim H_1  irreducible via {}{}\n",
                    r.k,
                    decimal(&r.lambda.lo, digits, false),
                    decimal(&r.lambda.hi, digits, true),
                    r.maximality.degree,
                    r.maximality.irreducibility.engine,
                    match &r.maximality.irreducibility.elimination {
                        Some(t) => format!(" (+{} elimination traces)", t.len()),
                        None => String::new(),
                    }
                );
            }
            for f in &report.failures {
                s += &format!("k={:<3} FAILED: {}\n", f.k, f.error);
            }
            s
        }
    };
    Ok(Outcome {
        output,
        ok: report.failures.is_empty(),
    })
}

// ------------------------------------------------------------------- search

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRow {
    pub word: String,
    pub lambda: RootApprox,
    pub char_poly: UniPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema_version: u32,
    pub command: String,
    pub note: String,
    pub config: ConfigView,
    pub k: usize,
    pub results: Vec<SearchRow>,
}

pub fn check_row(k: usize, row: &SearchRow) -> Result<(), String> {
    let word = MappingClassWord::parse(k, &row.word).map_err(|e| e.to_string())?;
    let cp = char_poly(&word_matrix(&word).map_err(|e| e.to_string())?);
    if cp != row.char_poly {
        return Err(format!("{}: characteristic polynomial does not match", row.word));
    }
    let mut p = cp.squarefree_part();
    let x_minus_one = UniPoly::from_i64s(&[-1, 1]);
    while p.deg() > 0 && p.eval(&1.into()).is_zero() {
        p = p.div_exact(&x_minus_one).expect("1 is a root");
    }
    check_root(&p, &row.lambda).map_err(|e| format!("{}: {e}", row.word))
}

pub fn search(config: &RunConfig) -> Result<Outcome, CommandError> {
    let k = config.ks[0];
    let cache = CacheHandle::open(config);
    let rows = cache
        .get_or_compute(
            config,
            k,
            |rows: &Vec<SearchRow>| rows.iter().try_for_each(|r| check_row(k, r)),
            || {
                let hits = search_family(k, config.max_len, &config.tol).map_err(|e| e.to_string())?;
                Ok(hits
                    .into_iter()
                    .map(|h| SearchRow {
                        word: h.word.to_string(),
                        lambda: h.dilatation,
                        char_poly: h.char_poly,
                    })
                    .collect())
            },
        )
        .map_err(|e| CommandError::Failed(format!("k={k}: {e}")))?;
    let report = SearchReport {
        schema_version: SCHEMA_VERSION,
        command: "search".into(),
        note: SEARCH_BANNER.into(),
        config: ConfigView::of(config),
        k,
        results: rows,
    };
    let digits = digits_for(config);
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_string(
            &["word", "lambda_lo", "lambda_hi", "char_poly"],
            report
                .results
                .iter()
                .map(|r| {
                    vec![
                        r.word.clone(),
                        decimal(&r.lambda.lo, digits, false),
                        decimal(&r.lambda.hi, digits, true),
                        r.char_poly.to_string(),
                    ]
                })
                .collect(),
        ),
        Format::Text => {
            let mut s = format!("# {SEARCH_BANNER}\n");
            let width = report.results.iter().map(|r| r.word.len()).max().unwrap_or(4).max(4);
            s += &format!("{:<width$}  {:<18}  char_poly\n", "word", "lambda");
            for r in &report.results {
                s += &format!("{:<width$}  {:<18.15}  {}\n", r.word, r.lambda.value, r.char_poly);
            }
            s += &format!("{} word(s)\n", report.results.len());
            s
        }
    };
    Ok(Outcome { output, ok: true })
}

// -------------------------------------------------------------------- prove

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProveReport {
    pub schema_version: u32,
    pub command: String,
    pub config: ConfigView,
    pub certificate: IrreducibilityCertificate,
}

fn verdict_ok(cert: &IrreducibilityCertificate) -> Result<(), String> {
    check_certificate(cert)?;
    if cert.verdict == Verdict::Inconclusive {
        return Err("no engine decided".into());
    }
    Ok(())
}

pub fn prove(config: &RunConfig, poly: Option<&str>) -> Result<Outcome, CommandError> {
    let options = prove_options(config);
    let certificate = match (poly, config.ks.first()) {
        (Some(text), _) => {
            let p: UniPoly = text.parse().map_err(|e| CommandError::Usage(format!("--poly: {e}")))?;
            prove_irreducible_with(&p, &options).map_err(|e| CommandError::Usage(format!("{p}: {e}")))?
        }
        (None, Some(&k)) => {
            let cache = CacheHandle::open(config);
            cache
                .get_or_compute(
                    config,
                    k,
                    |c: &IrreducibilityCertificate| {
                        if c.polynomial != ls_polynomial(k).map_err(|e| e.to_string())? {
                            return Err("different polynomial".into());
                        }
                        verdict_ok(c)
                    },
                    || {
                        let p = ls_polynomial(k).map_err(|e| e.to_string())?;
                        prove_irreducible_with(&p, &options).map_err(|e| e.to_string())
                    },
                )
                .map_err(|e| CommandError::Failed(format!("k={k}: {e}")))?
        }
        (None, None) => return Err(CommandError::Usage("prove needs --k or --poly".into())),
    };
    let check = verdict_ok(&certificate);
    if let Err(e) = &check {
        eprintln!("error: {e}");
    }
    let report = ProveReport {
        schema_version: SCHEMA_VERSION,
        command: "prove".into(),
        config: ConfigView::of(config),
        certificate,
    };
    let cert = &report.certificate;
    let verdict = match &cert.verdict {
        Verdict::Irreducible => "irreducible".to_string(),
        Verdict::Inconclusive => "inconclusive".to_string(),
        Verdict::Reducible { factors } => {
            let shown: Vec<String> = factors.iter().map(|f| format!("({f})")).collect();
            format!("reducible = {}", shown.join(" * "))
        }
    };
    let output = match config.format {
        Format::Json => to_json(&report),
        Format::Csv => csv_string(
            &["polynomial", "verdict", "engine"],
            vec![vec![cert.polynomial.to_string(), verdict, cert.engine.to_string()]],
        ),
        Format::Text => format!("{}: {verdict} (engine {})\n", cert.polynomial, cert.engine),
    };
    Ok(Outcome {
        output,
        ok: check.is_ok(),
    })
}

// ------------------------------------------------------------------- verify

/// Re-check a report written by any other subcommand, or a bare certificate.
pub fn verify_document(doc: &Value) -> Result<String, String> {
    let parse = |what: &str| format!("not a valid {what} document");
    match doc.get("command").and_then(Value::as_str) {
        Some("certify") => {
            let r: CertifyReport = serde_json::from_value(doc.clone()).map_err(|e| format!("{}: {e}", parse("certify")))?;
            if !r.failures.is_empty() {
                return Err(format!("report lists {} failure(s)", r.failures.len()));
            }
            for rec in &r.results {
                check_record(rec).map_err(|e| format!("k={}: {e}", rec.k))?;
            }
            Ok(format!("{} certificate(s) verified", r.results.len()))
        }
        Some("prove") => {
            let r: ProveReport = serde_json::from_value(doc.clone()).map_err(|e| format!("{}: {e}", parse("prove")))?;
            verdict_ok(&r.certificate)?;
            Ok(format!("certificate for {} verified", r.certificate.polynomial))
        }
        Some("construct") => {
            let r: ConstructReport =
                serde_json::from_value(doc.clone()).map_err(|e| format!("{}: {e}", parse("construct")))?;
            let fresh = construct_report(r.k).map_err(|e| e.to_string())?;
            if fresh != r {
                return Err(format!("construction for k={} does not reproduce", r.k));
            }
            if !r.ok {
                return Err("construction checks failed".into());
            }
            Ok(format!("construction for k={} reproduced", r.k))
        }
        Some("search") => {
            let r: SearchReport = serde_json::from_value(doc.clone()).map_err(|e| format!("{}: {e}", parse("search")))?;
            for row in &r.results {
                check_row(r.k, row)?;
            }
            let sorted = r
                .results
                .windows(2)
                .all(|w| (&w[0].lambda.lo, &w[0].word) <= (&w[1].lambda.lo, &w[1].word));
            if !sorted {
                return Err("search table is not sorted".into());
            }
            Ok(format!("{} search row(s) verified", r.results.len()))
        }
        Some(other) => Err(format!("unknown command `{other}`")),
        None => {
            if let Ok(c) = serde_json::from_value::<MaximalityCertificate>(doc.clone()) {
                check_maximality(&c)?;
                return Ok(format!("maximality certificate for k={} verified", c.k));
            }
            if let Ok(c) = serde_json::from_value::<IrreducibilityCertificate>(doc.clone()) {
                check_certificate(&c)?;
                return Ok(format!("certificate for {} verified", c.polynomial));
            }
            if let Ok(r) = serde_json::from_value::<CertifyRecord>(doc.clone()) {
                check_record(&r)?;
                return Ok(format!("record for k={} verified", r.k));
            }
            Err("unrecognized document".into())
        }
    }
}

pub fn verify(text: &str, format: Format) -> Outcome {
    let result = serde_json::from_str::<Value>(text)
        .map_err(|e| format!("invalid JSON: {e}"))
        .and_then(|doc| verify_document(&doc));
    let (ok, message) = match result {
        Ok(m) => (true, m),
        Err(e) => (false, e),
    };
    let output = match format {
        Format::Json => to_json(&serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "ok": ok,
            "message": message,
        })),
        Format::Csv => csv_string(&["ok", "message"], vec![vec![ok.to_string(), message]]),
        Format::Text => format!("{}: {message}\n", if ok { "verified" } else { "FAILED" }),
    };
    Outcome { output, ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CommandKind, KRange, RawFlags};

    fn config(command: CommandKind, k: &str) -> RunConfig {
        RunConfig::new(
            command,
            RawFlags {
                k: Some(k.parse::<KRange>().unwrap()),
                tol: "1e-12".into(),
                prime_bound: 200,
                elimination: false,
                max_len: 1,
                format: Format::Json,
                cache: None,
            },
            true,
        )
        .unwrap()
    }

    #[test]
    fn construct_reports_pass_and_verify() {
        for k in 2..=5 {
            let r = construct_report(k).unwrap();
            assert!(r.ok, "k={k}");
            let doc = serde_json::to_value(&r).unwrap();
            verify_document(&doc).unwrap();
        }
    }

    #[test]
    fn certify_records_verify_and_tampering_is_caught() {
        let out = certify(&config(CommandKind::Certify, "2..4")).unwrap();
        assert!(out.ok);
        let mut doc: Value = serde_json::from_str(&out.output).unwrap();
        verify_document(&doc).unwrap();
        doc["results"][1]["lambda"]["lo"] = Value::String("3/2".into());
        assert!(verify_document(&doc).is_err());
    }

    #[test]
    fn search_rows_revalidate() {
        let out = search(&config(CommandKind::Search, "3")).unwrap();
        let doc: Value = serde_json::from_str(&out.output).unwrap();
        verify_document(&doc).unwrap();
        let mut bad: SearchReport = serde_json::from_value(doc).unwrap();
        bad.results[0].word = "id".into();
        assert!(verify_document(&serde_json::to_value(&bad).unwrap()).is_err());
    }

    #[test]
    fn digits_follow_tolerance() {
        let c = config(CommandKind::Certify, "2");
        assert_eq!(digits_for(&c), 14);
    }
}
