use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn conforma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conforma")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn symbolic_hv_ab_axioms_pass() {
    let out = conforma(&["verify-axioms", "--algebra", "hv_ab", "--symbolic", "--window", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("verify-axioms [PASS]"), "{text}");
}

#[test]
fn broken_jacobi_fails_with_residual() {
    let out = conforma(&["verify-axioms", "--spec", &fixture("broken_jacobi.json"), "--window", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_of(&out);
    assert_eq!(r["status"], "FAIL");
    assert_eq!(r["schema"], 1);
    let jacobi = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "broken.jacobi").unwrap();
    assert_eq!(jacobi["status"], "FAIL");
    let sample = &jacobi["detail"]["residual_samples"][0];
    assert!(sample["residual"].as_str().is_some_and(|s| s.contains('H')));
    let skew = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "broken.skew-symmetry").unwrap();
    assert_eq!(skew["status"], "PASS");
}

#[test]
fn annihilation_crosscheck_matches() {
    let out = conforma(&["annihilation", "--window", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["checks"][0]["detail"]["verdict"], "MATCH");
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("r{k}.json"));
        let out = conforma(&["classify", "--window", "3", "--forward-window", "3", "--replay-window", "3", "--seed", "11", "--report", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(v["wall_time_ms"].is_u64());
        v.as_object_mut().unwrap().remove("wall_time_ms");
        bodies.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    assert!(bodies[0].contains("\"assumptions\""));
}

#[test]
fn emitted_spec_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vir.json");
    let out = conforma(&["emit-spec", "--algebra", "vir_cur_sl2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = conforma(&["verify-axioms", "--spec", path.to_str().unwrap(), "--window", "0", "--lo", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(conforma(&["verify-axioms", "--algebra", "e8"]).status.code(), Some(2));
    assert_eq!(conforma(&["derivations", "--alpha", "x"]).status.code(), Some(2));
    assert_eq!(conforma(&["derivations", "--alpha", "2", "--beta", "1", "--shift", "4..1"]).status.code(), Some(2));
    assert_eq!(conforma(&["nilpotent", "--window", "0"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_conforma")).args(["nilpotent", "--count", "1"]).env("CONFORMA_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
