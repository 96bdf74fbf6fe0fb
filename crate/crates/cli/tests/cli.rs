use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilatation-lab"))
        .args(args)
        .env_remove("DILATATION_LAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn construct_k3_shows_the_matrix_and_polynomial() {
    let o = lab(&["construct", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("M_3"));
    assert!(text.contains("x^5-x^3-x^2-1"));
    let doc = json(&lab(&["construct", "--k", "3", "--format", "json"]));
    let rows: Vec<Vec<String>> = serde_json::from_value(doc["phi_matrix"]["rows"].clone()).unwrap();
    assert_eq!(rows[4], ["1", "0", "1", "1", "0"]);
    assert_eq!(doc["diagram"]["labels"], serde_json::json!([1, 5, 2, 1, 3, 2, 4, 3, 5, 4]));
}

#[test]
fn construct_k2_topology() {
    let doc = json(&lab(&["construct", "--k", "2", "--format", "json"]));
    assert_eq!(doc["topology"]["genus"], 4);
    assert_eq!(doc["topology"]["boundary_components"], 1);
    assert_eq!(doc["topology"]["orientable"], false);
    assert_eq!(doc["ok"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(lab(&["construct", "--k", "1"]).status.code(), Some(2));
    assert_eq!(lab(&["construct", "--k", "2..4"]).status.code(), Some(2));
    assert_eq!(lab(&["certify", "--k", "3", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(lab(&["certify", "--k", "3", "--prime-bound", "2"]).status.code(), Some(2));
    assert_eq!(lab(&["certify"]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(&["verify", "/nonexistent/report.json"]).status.code(), Some(2));
    assert_eq!(lab(&["prove", "--poly", "2x^2+4"]).status.code(), Some(2));
}

#[test]
fn certify_range_passes() {
    let o = lab(&["certify", "--k", "2..10", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["schema_version"], 1);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 9);
    assert!(doc["failures"].as_array().unwrap().is_empty());
    for (r, k) in results.iter().zip(2..) {
        assert_eq!(r["k"], k);
        assert_eq!(r["maximality"]["degree"], 2 * k - 1);
    }
}

#[test]
fn certify_with_elimination_embeds_traces() {
    let doc = json(&lab(&["certify", "--k", "3", "--elimination", "--format", "json"]));
    let traces = doc["results"][0]["maximality"]["irreducibility"]["elimination"]
        .as_array()
        .expect("traces attached");
    assert_eq!(traces.len(), 4);
}

#[test]
fn certify_csv_row() {
    let o = lab(&["certify", "--k", "2", "--format", "csv"]);
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        ["k", "lambda_lo", "lambda_hi", "degree", "engine", "wall_time_ms"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][3], "3");
    let lo: f64 = rows[0][1].parse().unwrap();
    let hi: f64 = rows[0][2].parse().unwrap();
    assert!(lo <= 1.839286755214161 && 1.839286755214161 <= hi);
}

#[test]
fn search_tables() {
    let doc = json(&lab(&["search", "--k", "3", "--max-len", "1", "--format", "json"]));
    assert!(doc["note"].as_str().unwrap().starts_with("exploration only"));
    let results = doc["results"].as_array().unwrap();
    let phi = results.iter().find(|r| r["word"] == "r.T1").expect("r.T1 listed");
    assert!((phi["lambda"]["value"].as_f64().unwrap() - 1.42912).abs() < 1e-4);

    let empty = json(&lab(&["search", "--k", "2", "--max-len", "0", "--format", "json"]));
    assert!(empty["results"].as_array().unwrap().is_empty());

    let wider = json(&lab(&["search", "--k", "3", "--max-len", "2", "--format", "json"]));
    let min = wider["results"][0]["lambda"]["value"].as_f64().unwrap();
    assert!(min <= 1.42912 + 1e-12);
    assert!(stdout(&lab(&["search", "--k", "3", "--max-len", "1"])).starts_with("# exploration only"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["certify", "--k", "2..6", "--format", "json"][..],
        &["search", "--k", "3", "--max-len", "2", "--format", "json"][..],
        &["construct", "--k", "4", "--format", "json"][..],
    ] {
        assert_eq!(lab(args).stdout, lab(args).stdout, "{args:?}");
    }
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> String {
    let path = dir.join(name);
    std::fs::write(&path, bytes).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let first = lab(&["certify", "--k", "2..4", "--format", "json", "--cache", c]);
    assert_eq!(first.status.code(), Some(0));
    let entries = std::fs::read_dir(&cache).unwrap().count();
    assert_eq!(entries, 3, "one entry per k and the lock is released");
    let second = lab(&["certify", "--k", "2..4", "--format", "json", "--cache", c]);
    assert_eq!(first.stdout, second.stdout);

    // A tampered entry is recomputed rather than trusted.
    let entry = std::fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("certify-k3-"))
        .unwrap();
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    doc["payload"]["lambda"]["lo"] = Value::String("1".into());
    std::fs::write(&entry, serde_json::to_string(&doc).unwrap()).unwrap();
    let third = lab(&["certify", "--k", "2..4", "--format", "json", "--cache", c]);
    assert_eq!(first.stdout, third.stdout);
    let repaired: Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    assert_ne!(repaired["payload"]["lambda"]["lo"], "1");
}

#[test]
fn cache_env_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let from_env = dir.path().join("env");
    let from_flag = dir.path().join("flag");
    let o = Command::new(env!("CARGO_BIN_EXE_dilatation-lab"))
        .args(["certify", "--k", "2", "--cache", from_flag.to_str().unwrap()])
        .env("DILATATION_LAB_CACHE", &from_env)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(&from_env).unwrap().count(), 1);
    assert!(!from_flag.exists());
}

#[test]
fn locked_cache_is_bypassed() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(".dilatation-lab.lock"), "1\n").unwrap();
    let o = lab(&["certify", "--k", "2", "--cache", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("locked"));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn written_reports_verify() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("certify.json", &["certify", "--k", "2..5", "--format", "json"][..]),
        ("elim.json", &["certify", "--k", "3", "--elimination", "--format", "json"][..]),
        ("prove.json", &["prove", "--k", "7", "--format", "json"][..]),
        ("reducible.json", &["prove", "--poly", "x^4+4", "--format", "json"][..]),
        ("search.json", &["search", "--k", "3", "--max-len", "2", "--format", "json"][..]),
        ("construct.json", &["construct", "--k", "3", "--format", "json"][..]),
    ] {
        let o = lab(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let path = write(dir.path(), name, &o.stdout);
        let v = lab(&["verify", &path]);
        assert_eq!(v.status.code(), Some(0), "{name}: {}", stdout(&v));
    }

    // A bare certificate embedded in a report verifies on its own.
    let doc = json(&lab(&["prove", "--k", "5", "--format", "json"]));
    let path = write(dir.path(), "bare.json", doc["certificate"].to_string().as_bytes());
    assert_eq!(lab(&["verify", &path]).status.code(), Some(0));
}

#[test]
fn tampered_reports_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = json(&lab(&["certify", "--k", "4", "--format", "json"]));
    doc["results"][0]["maximality"]["degree"] = serde_json::json!(5);
    let path = write(dir.path(), "bad.json", doc.to_string().as_bytes());
    let v = lab(&["verify", &path]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).starts_with("FAILED"));

    let mut doc = json(&lab(&["construct", "--k", "3", "--format", "json"]));
    doc["char_poly_text"] = Value::String("x^5-1".into());
    let path = write(dir.path(), "bad-construct.json", doc.to_string().as_bytes());
    assert_eq!(lab(&["verify", &path]).status.code(), Some(1));

    let path = write(dir.path(), "garbage.json", b"{not json");
    assert_eq!(lab(&["verify", &path]).status.code(), Some(1));
}
