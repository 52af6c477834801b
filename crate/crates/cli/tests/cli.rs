use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gale")).args(args).output().unwrap()
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_passes_on_superperiodic_input() {
    let out = gale(&["check", &corpus("quiddity_13122.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn check_fails_on_perturbed_input() {
    let out = gale(&["--format", "json", "check", &corpus("negative/negative_perturbed.json")]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["passed"], Value::Bool(false));
    assert_eq!(report["checks"]["superperiodic"]["status"], "FAIL");
    assert_eq!(report["checks"]["division_left"]["status"], "FAIL");
}

#[test]
fn worked_example_curve_is_reported() {
    let out = gale(&["--format", "json", "check", &corpus("negative/negative_worked.json")]);
    let report = json(&out);
    assert_eq!(report["checks"]["curve_two_routes"]["status"], "PASS");
    assert_eq!(report["checks"]["curve_shape"]["status"], "PASS");
}

#[test]
fn malformed_input_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"n": 3}"#).unwrap();
    assert_eq!(gale(&["check", path.to_str().unwrap()]).status.code(), Some(3));
    std::fs::write(&path, r#"{"n": 3, "terms": {"-2": ["1", "1", "1"], "-1": ["1", "x", "1"]}}"#).unwrap();
    assert_eq!(gale(&["check", path.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(gale(&["check", "/definitely/missing.json"]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(gale(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gale(&["gen", "--k", "1", "--n", "4"]).status.code(), Some(2));
    assert_eq!(gale(&["--series-order", "0", "demo"]).status.code(), Some(2));
    assert_eq!(gale(&["--tolerance", "-1", "demo"]).status.code(), Some(2));
    assert_eq!(gale(&["commuting", &corpus("n3.json"), "--scramble", "alpha=1"]).status.code(), Some(2));
}

#[test]
fn gen_output_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    for (k, n) in [("1", "7"), ("3", "7")] {
        let path = dir.path().join(format!("op_{k}_{n}.json"));
        let path = path.to_str().unwrap();
        let out = gale(&["gen", "--k", k, "--n", n, "--seed", "42", "--output", path]);
        assert_eq!(out.status.code(), Some(0));
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(doc["provenance"]["seed"], 42);
        assert_eq!(gale(&["check", path]).status.code(), Some(0), "k={k}, n={n}");
    }
}

#[test]
fn gen_is_deterministic() {
    let a = gale(&["gen", "--k", "1", "--n", "9", "--seed", "5"]);
    let b = gale(&["gen", "--k", "1", "--n", "9", "--seed", "5"]);
    let c = gale(&["gen", "--k", "1", "--n", "9", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn dual_of_the_smallest_example() {
    let out = gale(&["--format", "json", "dual", &corpus("n3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let shift = serde_json::json!({"n": 3, "terms": {"-1": ["1", "1", "1"]}});
    assert_eq!(doc["dual_commuting"], shift);
    assert_eq!(doc["gale"], shift);
}

#[test]
fn dual_output_is_itself_superperiodic() {
    let dir = tempfile::tempdir().unwrap();
    let out = gale(&["--format", "json", "dual", &corpus("quiddity_13122.json")]);
    let doc = json(&out);
    let path = dir.path().join("gale.json");
    std::fs::write(&path, serde_json::to_string(&doc["gale"]).unwrap()).unwrap();
    assert_eq!(gale(&["check", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn commuting_scramble_round_trips() {
    for spec in ["alpha=3,c=2", "alpha=-2,c=1/3"] {
        let out = gale(&["commuting", &corpus("quiddity_13122.json"), "--scramble", spec]);
        assert_eq!(out.status.code(), Some(0), "{spec}: {}", stdout(&out));
    }
}

#[test]
fn commuting_with_explicit_partner() {
    let out = gale(&[
        "--format",
        "json",
        "commuting",
        &corpus("n3.json"),
        "--partner",
        &corpus("partners/n3_dual.json"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(json(&out)["passed"], Value::Bool(true));
}

#[test]
fn demo_passes() {
    let out = gale(&["demo"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("order 3: T^-3 + (1, 3, 1, 2, 2)*T^-2 + (2, 2, 1, 3, 1)*T^-1"), "{text}");
}

#[test]
fn numeric_inputs_are_checked_to_tolerance() {
    let out = gale(&["--format", "json", "check", &corpus("lift_k2_n5.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["checks"]["superperiodic"]["kind"], "numeric");
}
