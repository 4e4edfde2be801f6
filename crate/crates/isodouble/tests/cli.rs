//! Black-box tests of the command-line interface: exit codes, output
//! shape, file handling, and environment overrides.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_isodouble"));
    c.env_remove("ISODOUBLE_SEED").env_remove("ISODOUBLE_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn build_system_file(dir: &tempfile::TempDir) -> PathBuf {
    let path = dir.path().join("system.json");
    let out = bin()
        .args(["clifford", "build", "--m", "4", "--plus", "2", "--minus", "0", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn build_prints_document_without_out_flag() {
    let out = run(&["clifford", "build", "--m", "2", "--plus", "1", "--minus", "0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["m"], 2);
    assert_eq!(doc["l"], 2);
    let summary = String::from_utf8_lossy(&out.stderr);
    assert!(summary.contains("parity_ok"));
}

#[test]
fn verify_round_trips_a_built_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_system_file(&dir);
    let out = run(&["clifford", "verify", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass: true"));
}

#[test]
fn verify_rejects_corrupted_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"m\": 4, \"l\": oops").unwrap();
    let out = run(&["clifford", "verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn verify_rejects_tampered_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_system_file(&dir);
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["matrices"][1][0][0] = serde_json::json!(1e-6);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["clifford", "verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass: false"));
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let out = run(&["clifford", "build", "--m", "4", "--bogus", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_a_clean_failure() {
    let out = run(&["fkm", "check", "--system", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn spectrum_rejects_singular_levels() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_system_file(&dir);
    let out = run(&["fkm", "spectrum", "--system", path.to_str().unwrap(), "--level", "1.0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("level"));
}

#[test]
fn certify_exit_codes_follow_the_verdict() {
    // window-aware planner succeeds
    let out = run(&["double", "certify", "--g", "3", "--mplus", "1", "--mminus", "1"]);
    assert!(out.status.success());
    // plain bump through the focal radius fails honestly
    let out = run(&[
        "double", "certify", "--g", "3", "--mplus", "1", "--mminus", "1", "--rbar", "2.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("pass: false"));
    // too-small outer radius is infeasible, with the minimal one reported
    let out = run(&[
        "double", "certify", "--g", "4", "--mplus", "4", "--mminus", "3", "--rbar", "1.0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("smallest workable"));
}

#[test]
fn distinguish_inapplicable_reports_reason() {
    let out = run(&[
        "topology", "distinguish", "--m", "16", "--l", "128", "--q1", "0", "--q2", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("p = m/2+1 not prime"));
}

#[test]
fn table_filter_row_counts() {
    let out = run(&["topology", "table", "--g", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 5); // header plus four rows
    let out = run(&["topology", "table"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 15);
}

#[test]
fn json_envelope_echoes_config() {
    let out = run(&[
        "--output", "json", "topology", "cohomology", "--g", "4", "--mplus", "4", "--mminus",
        "3",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["command"], "topology cohomology");
    assert_eq!(v["config"]["g"], 4);
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["report"]["focal_plus"]["ranks"][3], 1);
}

#[test]
fn env_seed_changes_sampling_and_flag_wins() {
    let dir = tempfile::tempdir().unwrap();
    let path = build_system_file(&dir);
    let sys = path.to_str().unwrap();
    let base = run(&["--output", "json", "fkm", "spectrum", "--system", sys, "--level", "0.3"]);
    let via_env = bin()
        .args(["--output", "json", "fkm", "spectrum", "--system", sys, "--level", "0.3"])
        .env("ISODOUBLE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(base.stdout, via_env.stdout);
    let other_env = bin()
        .args(["--output", "json", "fkm", "spectrum", "--system", sys, "--level", "0.3"])
        .env("ISODOUBLE_SEED", "77")
        .output()
        .unwrap();
    assert_ne!(base.stdout, other_env.stdout);
    let flag_wins = bin()
        .args([
            "--output", "json", "fkm", "spectrum", "--system", sys, "--level", "0.3", "--seed",
            "42",
        ])
        .env("ISODOUBLE_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(base.stdout, flag_wins.stdout);
}

#[test]
fn bad_env_values_fail_cleanly() {
    let out = bin()
        .args(["topology", "table"])
        .env("ISODOUBLE_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ISODOUBLE_SEED"));
}
