//! End-to-end runs of the `schwinger` binary: exit codes, output formats
//! and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schwinger"))
        .args(args)
        .env_remove("SCHWINGER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn estimate_csv_row() {
    let text = stdout(&["estimate", "--N", "16", "--wt", "1"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version=1"));
    assert_eq!(lines.next(), Some("N,wt,epsilon,t_count,runtime_days,ancilla,logical_qubits"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "16");
    assert_eq!(row[3], "9128762000");
    assert!(lines.next().is_none());
}

#[test]
fn estimate_defaults_cover_the_table() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["estimate", "--defaults", "--format", "json"])).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["rows"].as_array().unwrap().len(), 15);
}

#[test]
fn estimate_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let text = stdout(&["estimate", "--N", "32", "--wt", "10", "--output", path.to_str().unwrap()]);
    assert!(text.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("# schema_version=1\n"));
    assert_eq!(written.lines().count(), 3);
}

#[test]
fn physical_footprint() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["physical", "--format", "json"])).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows[0]["physical_qubits"], 933_120);
    assert_eq!(rows[1]["physical_qubits"], 216_320);
    assert_eq!(rows[0]["logical_qubits"], 160);
}

#[test]
fn verify_reports_passing_checks() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["verify", "--suite", "arithmetic", "--bits", "3"])).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["pass"], true);
    assert!(json["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let block: serde_json::Value = serde_json::from_str(&stdout(&["verify", "--suite", "block", "--N", "8"])).unwrap();
    assert_eq!(block["pass"], true);
    assert!(block["block_encoding"]["measured_error"].as_f64().unwrap() <= 1e-2);
}

#[test]
fn dynamics_starts_in_the_vacuum() {
    let text = stdout(&["dynamics", "--steps", "4"]);
    let mut lines = text.lines().skip(1);
    assert_eq!(lines.next(), Some("t,re_g,im_g,abs_g,nu"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((first[3] - 1.0).abs() < 1e-12 && first[4].abs() < 1e-12);
    assert_eq!(lines.count(), 4);
}

#[test]
fn ae_is_deterministic_by_seed() {
    let args = ["ae", "--omega", "0.3", "--runs", "5", "--epsilon", "0.05", "--seed", "11"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert_eq!(a.lines().count(), 6);
    let from_env = Command::new(env!("CARGO_BIN_EXE_schwinger"))
        .args(&args[..args.len() - 2])
        .env("SCHWINGER_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(from_env.stdout).unwrap(), a);
    let summary: serde_json::Value = serde_json::from_str(a.lines().last().unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["summary"][0]["runs"], 5);
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["estimate", "--N", "7", "--wt", "1"][..],
        &["physical", "--p", "0.02"],
        &["verify", "--N", "7"],
        &["verify", "--bits", "11"],
        &["ae", "--epsilon", "0"],
        &["nonsense"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
