use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Map, Value};

fn normlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str], path: &Path) -> (i32, Value) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--report", path.to_str().unwrap()]);
    let out = normlab(&full);
    let text = std::fs::read_to_string(path).expect("report written");
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap())
}

/// Keys and value types only; arrays keep the shape of their first element.
fn skeleton(v: &Value) -> Value {
    match v {
        Value::Null => json!("null"),
        Value::Bool(_) => json!("bool"),
        Value::Number(_) => json!("number"),
        Value::String(_) => json!("string"),
        Value::Array(items) => Value::Array(items.first().map(skeleton).into_iter().collect()),
        Value::Object(m) => Value::Object(
            m.iter()
                .map(|(k, v)| (k.clone(), skeleton(v)))
                .collect::<Map<_, _>>(),
        ),
    }
}

#[test]
fn paper_demos_report_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (code, value) = report(
        &["verify", "--suite", "paper-demos", "--seed", "42"],
        &dir.path().join("r.json"),
    );
    assert_eq!(code, 0);
    assert_eq!(value["schema_version"], json!(1));
    assert_eq!(value["command"], json!("verify"));
    assert_eq!(value["header"]["seed"], json!(42));
    let golden: Value = serde_json::from_str(include_str!("golden/paper_demos_schema.json")).unwrap();
    assert_eq!(skeleton(&value), golden);
    let cases = value["result"]["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 6);
    assert!(cases.iter().all(|c| c["status"] == json!("pass")));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["probe-minimality", "--norm", "max-c-r", "--seed", "11", "--trials", "20"];
    let (_, mut a) = report(&args, &dir.path().join("a.json"));
    let (_, mut b) = report(&args, &dir.path().join("b.json"));
    a.as_object_mut().unwrap().remove("elapsed_ms");
    b.as_object_mut().unwrap().remove("elapsed_ms");
    assert_eq!(a, b);
}

#[test]
fn eval_spectral_inline_matrix() {
    let out = normlab(&["eval", "--norm", "spectral", "--matrix", "1,2;3,4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: f64 = text.rsplit('=').next().unwrap().trim().parse().unwrap();
    // σ_max of [[1,2],[3,4]]: sqrt((30 + sqrt(884)) / 2).
    let oracle = ((30.0 + 884f64.sqrt()) / 2.0).sqrt();
    assert!((v - oracle).abs() <= 1e-12 * oracle, "{v} vs {oracle}");
}

#[test]
fn probe_sigma_finds_gap() {
    let dir = tempfile::tempdir().unwrap();
    let (code, value) = report(
        &["probe-minimality", "--norm", "sigma", "--seed", "7"],
        &dir.path().join("p.json"),
    );
    assert_eq!(code, 0);
    assert_eq!(value["result"]["verdict"], json!("gap_found"));
    let ratio = value["result"]["max_gap_ratio"].as_f64().unwrap();
    assert!((ratio - 0.5f64.sqrt()).abs() <= 1e-3);
}

#[test]
fn lemma21_reports_j_violation() {
    let dir = tempfile::tempdir().unwrap();
    let (code, value) = report(
        &["verify", "--suite", "lemma21", "--norm1", "l1", "--norm2", "linf", "--trials", "10"],
        &dir.path().join("l.json"),
    );
    assert_eq!(code, 0);
    let case = &value["result"]["cases"][1];
    assert_eq!(case["values"][0], json!({"name": "norm_ab", "value": 2.0}));
    assert_eq!(case["values"][1], json!({"name": "norm_a", "value": 1.0}));
    assert_eq!(case["witness"]["kind"], json!("matrices"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(normlab(&["eval"]).status.code(), Some(2));
    assert_eq!(normlab(&["frobnicate"]).status.code(), Some(2));
    let out = normlab(&["eval", "--norm", "spectral", "--matrix", "1,2;3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}
