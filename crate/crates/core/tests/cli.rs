use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn examples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../examples")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab")).args(args).output().expect("spawn torsionlab")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn ex(name: &str) -> String {
    examples().join(name).display().to_string()
}

#[test]
fn snf_of_example_matrix() {
    let v = json(&run(&["snf", &ex("m1.json")]));
    assert_eq!(v["invariant_factors"], serde_json::json!(["2", "6", "12"]));
    assert_eq!(v["rank"], 3);
}

#[test]
fn snf_verify_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("snf.json");
    let r = report.to_str().unwrap();
    assert!(run(&["snf", &ex("m1.json"), "--out", r]).status.success());
    let v = json(&run(&["snf", &ex("m1.json"), "--verify", r]));
    assert_eq!(v["verified"], true);

    let mut stored: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    stored["invariant_factors"][2] = "24".into();
    std::fs::write(&report, stored.to_string()).unwrap();
    let out = run(&["snf", &ex("m1.json"), "--verify", r]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not verify"));
}

#[test]
fn recompute_verify_detects_changes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("q.json");
    let r = report.to_str().unwrap();
    assert!(run(&["quat", "classify", "--a", "-1", "--b", "-3", "--out", r]).status.success());
    assert!(run(&["quat", "classify", "--a", "-1", "--b", "-3", "--verify", r]).status.success());
    let out = run(&["quat", "classify", "--a", "-1", "--b", "-1", "--verify", r]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hamilton_ramification() {
    let v = json(&run(&["quat", "classify", "--a", "-1", "--b", "-1"]));
    assert_eq!(v["ramification"], serde_json::json!(["2", "inf"]));
    assert_eq!(v["division"], true);
}

#[test]
fn hurwitz_units() {
    let v = json(&run(&["quat", "units", "--height", "2", "--hurwitz"]));
    assert_eq!(v["count"], 24);
}

#[test]
fn circle_sweep_runs() {
    let v = json(&run(&["manifold", "sweep", &ex("circle.tcx"), "--kmax", "5"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["cell_euler_characteristic"], 0);
}

#[test]
fn broken_spec_is_flagged() {
    let v = json(&run(&["manifold", "check", &ex("broken_euler.tcx")]));
    assert_eq!(v["consistent"], false);
    let v = json(&run(&["manifold", "check", &ex("torus3.tcx")]));
    assert_eq!(v["consistent"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["snf"]).status.code(), Some(2));
    assert_eq!(run(&["local", "vpart", "--q", "6", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rows": 2, "cols": 2, "entries": [["1", "x"], ["0", "1"]]}"#).unwrap();
    let out = run(&["snf", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = run(&["snf", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = run(&["--threads", "1", "manifold", "sweep", &ex("torus3.tcx"), "--kmax", "2"]);
    let b = run(&["--threads", "4", "manifold", "sweep", &ex("torus3.tcx"), "--kmax", "2"]);
    assert_eq!(json(&a), json(&b));
    let a = run(&["--threads", "1", "quat", "units", "--height", "1"]);
    let b = run(&["--threads", "3", "quat", "units", "--height", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .env("TORSIONLAB_PRECISION", "10")
        .args(["snf", &ex("m1.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ruelle_order_from_cohomology_report() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let cs = c.to_str().unwrap();
    assert!(run(&["manifold", "cohomology", &ex("torus3.tcx"), "--sym", "0", "--out", cs]).status.success());
    let v = json(&run(&["ruelle", "order", cs, "--trivial"]));
    // ranks (1, 3, 3, 1)
    assert_eq!(v["order_at_zero"], 2);
}
