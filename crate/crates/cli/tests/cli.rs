use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_g2ricci"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).expect("valid json");
    (v, out.status.code().unwrap())
}

fn all_checks_pass(v: &Value) -> bool {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true)
}

#[test]
fn values_at_mu_seven() {
    let (v, code) = json(&["values", "--mu", "7"]);
    assert_eq!(code, 0);
    let fibers = &v["enumeration"]["fibers"];
    assert_eq!(fibers["-7/2"], 1);
    assert_eq!(fibers["0"], 3);
    assert_eq!(fibers["7/2"], 3);
    assert_eq!(fibers["7"], 1);
    assert!(all_checks_pass(&v));
}

#[test]
fn kernels() {
    let (v, code) = json(&["kernels"]);
    assert_eq!(code, 0);
    let dims: Vec<u64> = ["1", "2", "3", "4"]
        .iter()
        .map(|k| v["dims"][k].as_u64().unwrap())
        .collect();
    assert_eq!(dims, [27, 20, 14, 9]);
}

#[test]
fn decompose_omega() {
    let path = data("omega3.form");
    let (v, code) = json(&["decompose", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda1"], v["input"]);
    assert_eq!(v["lambda7"], "0");
    assert_eq!(v["lambda27"], "0");
    assert_eq!(v["mu"], "1");
}

#[test]
fn decompose_rejects_wrong_degree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.form");
    std::fs::write(&path, "+1 e12\n").unwrap();
    let out = run(&["decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.form");
    std::fs::write(&path, "+1 e127\n+1 e1x7\n").unwrap();
    let out = run(&["decompose", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.form:2:"), "{err}");

    let path = dir.path().join("bad.alg");
    std::fs::write(&path, "dim 7\n1 2 3\n").unwrap();
    let out = run(&["group-report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("bad.alg:2:"));

    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "a = 0.2\nbogus = 1\n").unwrap();
    let out = run(&["kahler", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("bad.toml:2:"));
}

#[test]
fn invalid_numeric_parameters() {
    let out = run(&["kahler", "--domain=-1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["kahler", "--grid", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lemma_symmetric_and_asymmetric() {
    let (v, code) = json(&["lemma", "--m1", "6", "--m2", "6", "--m3", "6", "--mu", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], 9);

    // The solved b is ¼(m₁+m₂-m₃), which differs from ¼(-m₁+m₂+m₃) once m₁ ≠ m₃.
    let (v, code) = json(&["lemma", "--m1", "1", "--m2", "2", "--m3", "-3", "--mu", "7"]);
    assert_eq!(code, 1);
    assert_eq!(v["solved_b"], "3/2");
    assert!(!all_checks_pass(&v));
}

#[test]
fn group_report_builtin_and_file_agree() {
    let (builtin, code_a) = json(&["group-report"]);
    let path = data("r4_su2.alg");
    let (file, code_b) = json(&["group-report", path.to_str().unwrap()]);
    assert_eq!(code_a, code_b);
    assert_eq!(builtin["characteristic"], file["characteristic"]);
    assert_eq!(builtin["cocalibrated"], true);
    assert_eq!(builtin["characteristic"]["equivalence"]["ricci_flat"], true);
}

#[test]
fn group_report_misplacement() {
    let (v, code) = json(&["group-report", "--placement", "4,5,6,7,1,2,3"]);
    assert_eq!(code, 1);
    assert_eq!(v["cocalibrated"], false);
    assert!(v["characteristic"].is_null());
}

#[test]
fn json_is_byte_deterministic() {
    let args = ["--format", "json", "kahler", "--samples", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["kernels", "--format", "json", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dims"]["1"], 27);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(!String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}
