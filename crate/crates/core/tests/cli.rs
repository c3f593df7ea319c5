use std::process::Command;

use hullkit::cli::run_cli;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["hullkit"];
    argv.extend_from_slice(args);
    let out = run_cli(argv);
    assert!(out.stderr.is_empty() || out.status != 0, "{}", out.stderr);
    let report = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.status, report)
}

fn audit<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["audits"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["name"] == name)
        .unwrap_or_else(|| panic!("no audit {name}"))
}

#[test]
fn hull_of_a_transposition_in_s4() {
    let (status, rep) = run(&["hull", "--group", "family:symmetric:4", "--subgroup", "(1 2)"]);
    assert_eq!(status, 0);
    assert_eq!(rep["report"], "hullkit v1");
    assert_eq!(audit(&rep, "hull-equivalence")["verdict"], "pass");
    assert_eq!(audit(&rep, "hull-equivalence")["data"]["hull_order"], 24);
    assert_eq!(audit(&rep, "lemma-hull-decomposition")["verdict"], "pass");
}

#[test]
fn width_of_a3_in_s3() {
    let (status, rep) = run(&["width", "--group", "family:symmetric:3", "--subgroup", "(1 2 3),(1 2)"]);
    assert_eq!(status, 0);
    let w = audit(&rep, "width");
    assert_eq!(w["data"]["commutator_order"], 3);
    assert_eq!(w["data"]["width"], 1);
}

#[test]
fn commutator_of_s4_with_itself() {
    let (status, rep) = run(&["commutator", "--group", "family:symmetric:4", "--subgroup", "(1 2),(1 2 3 4)"]);
    assert_eq!(status, 0);
    assert_eq!(audit(&rep, "commutator-subgroup")["data"]["order"], 12);
    assert_eq!(audit(&rep, "lemma-commutator-normal")["verdict"], "pass");
}

#[test]
fn schur_reports_claims_without_failing() {
    let (status, rep) = run(&["schur", "--group", "family:dihedral:5", "--subgroup", "(1 2 3 4 5)", "--words", "50"]);
    assert_eq!(status, 0);
    assert_eq!(audit(&rep, "schur-context")["data"]["n"], 2);
    assert_eq!(audit(&rep, "claim-plain-commutators-le-n2")["verdict"], "claim-violated");
    assert_eq!(audit(&rep, "eq1-corrected-identity")["verdict"], "pass");
    assert_eq!(audit(&rep, "reduce-word")["verdict"], "pass");
    assert!(rep["summary"]["claim_violated"].as_u64().unwrap() >= 1);
}

#[test]
fn trace_with_alternating_component() {
    let (status, rep) = run(&[
        "trace",
        "--group",
        "family:symmetric:4",
        "--subgroup",
        "(1 2)",
        "--component",
        "(1 2 3),(2 3 4)",
    ]);
    assert_eq!(status, 0);
    for step in 1..=7 {
        assert_eq!(audit(&rep, &format!("trace-s{step}"))["verdict"], "pass");
    }
    assert_eq!(audit(&rep, "trace-hull-agreement")["data"]["hull_order"], 24);
    assert_eq!(audit(&rep, "corollary")["verdict"], "pass");
}

#[test]
fn element_ids_work_for_cayley_groups() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v4.txt");
    std::fs::write(&path, "format: cayley v1\norder: 4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
    let (status, rep) = run(&["hull", "--group", path.to_str().unwrap(), "--subgroup", "1"]);
    assert_eq!(status, 0);
    assert_eq!(audit(&rep, "hull-equivalence")["data"]["hull_order"], 2);
}

#[test]
fn non_normal_component_is_an_input_error() {
    let out = run_cli(["hullkit", "trace", "--group", "family:symmetric:3", "--component", "(1 2)"]);
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("normal"), "{}", out.stderr);
}

#[test]
fn bad_flags_print_usage() {
    let out = run_cli(["hullkit", "hull", "--no-such-flag"]);
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("Usage"), "{}", out.stderr);

    let out = run_cli(["hullkit", "frobnicate"]);
    assert_ne!(out.status, 0);

    let out = run_cli(["hullkit", "hull", "--group", "family:nonesuch:3"]);
    assert_eq!(out.status, 2);

    let out = run_cli(["hullkit", "hull", "--group", "family:symmetric:3", "--subgroup", "(1 4)"]);
    assert_eq!(out.status, 2);

    let out = run_cli(["hullkit", "hull", "--group", "family:symmetric:8"]);
    assert_eq!(out.status, 2);
    assert!(out.stderr.contains("too large"), "{}", out.stderr);
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let out = run_cli([
        "hullkit",
        "hull",
        "--group",
        "family:dihedral:4",
        "--subgroup",
        "(1 3)(2 4)",
        "--format",
        "text",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("hullkit v1"));
    assert!(text.contains("hull-equivalence"));
}

#[test]
fn binary_reads_seed_from_environment() {
    let exe = env!("CARGO_BIN_EXE_hullkit");
    let out = Command::new(exe)
        .args(["schur", "--group", "family:symmetric:3", "--subgroup", "(1 2)", "--words", "5"])
        .env("HULLKIT_SEED", "17")
        .output()
        .unwrap();
    assert!(out.status.success());
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["seed"], 17);

    let out = Command::new(exe).arg("--bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
