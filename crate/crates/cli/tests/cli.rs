use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn qgx() -> Command {
    Command::cargo_bin("qgx").unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn stdout(args: &[&str]) -> (i32, String) {
    let out = qgx().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn schema() -> jsonschema::Validator {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    let s: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

#[test]
fn ybe_n2_passes() {
    let (code, out) = stdout(&["check", "ybe", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("pass (95)"));
}

#[test]
fn all_n1_passes_and_validates() {
    let (code, out) = stdout(&["check", "all", "--n", "1", "--format", "json"]);
    assert_eq!(code, 0, "{}", out);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(schema().is_valid(&v));
    assert!(v.as_array().unwrap().len() > 50);
}

#[test]
fn mutation_fixtures_fail_with_witness() {
    let v = schema();
    for f in ["r_lambda_doubled.json", "r_diagonal_changed.json", "r_offdiagonal_q.json"] {
        let p = fixture(f);
        let (code, out) = stdout(&["check", "hecke", "--r-file", p.to_str().unwrap(), "--format", "json"]);
        assert_eq!(code, 1, "{}", f);
        let rep: Value = serde_json::from_str(&out).unwrap();
        assert!(v.is_valid(&rep));
        let e = rep.as_array().unwrap().iter().find(|e| e["equation"] == "(96)").unwrap();
        assert_eq!(e["status"], "fail");
        assert!(e["witness"].as_str().unwrap().contains("entry"));
        let (code, _) = stdout(&["check", "ybe", "--r-file", p.to_str().unwrap()]);
        assert_eq!(code, 1, "{}", f);
    }
}

#[test]
fn reports_are_deterministic() {
    let a = stdout(&["check", "relations", "--n", "2", "--format", "json"]);
    let b = stdout(&["check", "relations", "--n", "2", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn constants_d_n1() {
    let (code, out) = stdout(&["constants", "D", "--n", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
    assert_eq!(v["entries"][0]["val"], "q^-1");
}

#[test]
fn constants_sigma_n2_sorted() {
    let (code, out) = stdout(&["constants", "sigma", "--n", "2"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["legs"], 4);
    let idx: Vec<Vec<u64>> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["idx"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect();
    assert!(!idx.is_empty() && idx.len() <= 256);
    assert!(idx.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn r_export_import_round_trip() {
    let (_, out) = stdout(&["constants", "R", "--n", "2"]);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    std::fs::write(&p, &out).unwrap();
    let (code, again) = stdout(&["constants", "R", "--r-file", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, again);
    let (code, _) = stdout(&["check", "hecke", "--r-file", p.to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn nf_examples() {
    assert_eq!(stdout(&["nf", "t[1,1]"]), (0, "t[1,1]\n".into()));
    assert_eq!(stdout(&["nf", "w[1,1]*w[1,1]", "--n", "1"]), (0, "0\n".into()));
    let (code, out) = stdout(&["nf", "w[1,1]*t[1,1]", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("t[1,1]*w[1,1]"));
    assert_eq!(stdout(&["nf", "d(t[1,1])", "--n", "1"]), (0, "t[1,1]*w[1,1]\n".into()));
}

#[test]
fn nf_parse_error_has_position() {
    let out = qgx().args(["nf", "t[1,"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
}

#[test]
fn fuel_from_environment() {
    let out = qgx().env("QGX_FUEL", "1").args(["nf", "J[1,1]*w[1,1]*t[1,1]", "--n", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("steps"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["check", "nosuch"],
        vec!["check", "ybe", "--grade-cap", "4"],
        vec!["check", "ybe", "--format", "yaml"],
        vec!["constants", "E"],
    ] {
        assert_eq!(qgx().args(&args).output().unwrap().status.code(), Some(2), "{:?}", args);
    }
    let p = fixture("r_lambda_doubled.json");
    let code = qgx().args(["check", "ybe", "--n", "3", "--r-file", p.to_str().unwrap()]).output().unwrap().status.code();
    assert_eq!(code, Some(2));
}
