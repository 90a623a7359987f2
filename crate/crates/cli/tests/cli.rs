use std::path::Path;
use std::process::{Command, Output};

use gseed_core::corpus::{self, APERY};
use serde_json::{json, Value};

fn gseed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gseed"))
        .args(args)
        .env("GSEED_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.display().to_string()
}

#[test]
fn analyze_apery_operator_file() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "apery.json", &json!({ "label": "apery", "operator": APERY }));
    let out = gseed(&["analyze", "--spec", &spec, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert_eq!(rep["version"], 1);
    assert_eq!(rep["result"]["exponents"]["ell0"], 2);
    let inf = &rep["result"]["exponents"]["at_infinity"];
    assert_eq!(inf.as_array().unwrap().len(), 1, "{inf}");
    assert_eq!(inf[0], json!(["1", 3]));
}

#[test]
fn linform_on_polylog_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = serde_json::to_value(corpus::spec_by_label("log").unwrap()).unwrap();
    let path = write(dir.path(), "log.json", &spec);
    let out = gseed(&["linform", "--spec", &path, "--S", "3", "--r", "1", "--n", "10", "--alpha", "1/2", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(&out);
    let residual = rep["result"]["record"]["residual"].as_f64().unwrap();
    assert!(residual < 1e-20, "{residual}");
    assert_eq!(rep["config"]["alpha"], "1/2");
}

#[test]
fn malformed_alpha_is_an_input_error() {
    let out = gseed(&["linform", "--spec", "corpus:log", "--S", "3", "--r", "1", "--n", "4", "--alpha", "1/0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1/0"));
}

#[test]
fn other_input_errors() {
    for args in [
        &["linform", "--spec", "corpus:log", "--S", "2", "--r", "3", "--n", "4"][..],
        &["linform", "--spec", "corpus:log", "--S", "2", "--n", "4", "--bits", "32"],
        &["coeffs", "--spec", "corpus:no-such-entry", "--n", "4"],
        &["analyze", "--spec", "/nonexistent/spec.json"],
    ] {
        assert_eq!(gseed(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn bundled_corpus_passes() {
    let out = gseed(&["corpus-check", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = report(&out);
    assert_eq!(rep["passed"], true);
    let ell0: Vec<&Value> = rep["result"]["outcomes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|o| o["check"] == "ell0")
        .collect();
    assert!(ell0.len() >= 12);
    assert!(ell0.iter().all(|o| o["passed"] == true));
}

#[test]
fn perturbed_corpus_fails_with_named_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = serde_json::to_value(corpus::bundled()).unwrap();
    let entry = c["entries"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e["label"] == "apery")
        .unwrap();
    entry["expect"]["coefficients"][3] = json!("1446");
    let path = write(dir.path(), "corpus.json", &c);
    let out = gseed(&["corpus-check", "--corpus", &path, "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let rep = report(&out);
    let failures = rep["failures"].as_array().unwrap();
    assert_eq!(failures.len(), 1, "{failures:?}");
    let f = failures[0].as_str().unwrap();
    assert!(f.starts_with("apery / coefficients") && f.contains("A_3"), "{f}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| {
        let path = dir.path().join(name);
        let p = path.display().to_string();
        let mut all = args.to_vec();
        all.extend(["--out", &p]);
        assert_eq!(gseed(&all).status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    for args in [
        &["linform", "--spec", "corpus:apery", "--S", "3", "--r", "1", "--n", "6", "--alpha", "1/100"][..],
        &["corpus-check"],
        &["asymp", "--spec", "corpus:chi4", "--S", "6", "--r", "1", "--alpha", "1/2"],
    ] {
        assert_eq!(run("a.json", args), run("b.json", args), "{args:?}");
    }
}
