//! End-to-end runs of the `hitchin` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hitchin"));
    cmd.args(args).env_remove("HITCHIN_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).expect("stdout is JSON")
}

#[test]
fn dims_output_is_exact() {
    let o = run(&["dims", "--g", "2", "--d", "3", "--n", "2"], &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"d_base\":7,\"d_fiber\":6,\"d_total\":13,\"gap\":-1}\n");
}

#[test]
fn canonical_support_excludes_nothing() {
    for n in ["2", "3", "4"] {
        let o = run(&["support", "--g", "2", "--n", n, "--canonical"], &[]);
        assert_eq!(o.status.code(), Some(0));
        let doc = json(&o);
        let rows = doc["rows"].as_array().unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r["verdict"] == "NotExcluded"), "{doc}");
    }
}

#[test]
fn verify_reports_worked_stratum() {
    let o = run(&["verify", "--q", "2", "--d", "1", "--label", "1,1", "--deg", "0,0", "--window", "4"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["values"]["sat"], "3/2");
    assert_eq!(doc["identity"]["predicted"], "3/2");
    assert_eq!(doc["identity"]["verdict"], "PASS");
}

#[test]
fn exit_codes() {
    // rejected input
    for args in [
        &["dims", "--n", "x"][..],
        &["dims", "--g", "1", "--n", "2"],
        &["frobnicate"],
        &["count", "--q", "4", "--d", "1", "--label", "1,1", "--deg", "0,0"],
        &["count", "--q", "2", "--d", "1", "--label", "1,1", "--deg", "0,0", "--convention", "both"],
        &["spectral", "--q", "5", "--d", "1", "--n", "2", "--g", "1"],
    ] {
        let o = run(args, &[]);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim().lines().count(), 1, "{err}");
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert!(v["error"].is_string() && v["message"].is_string());
    }
    let o = run(&["dims", "--g", "0", "--d", "1", "--n", "1"], &[("HITCHIN_WORKERS", "0")]);
    assert_eq!(o.status.code(), Some(1));
    // a failed verdict: q = 2 calibration tail stays above threshold
    let o = run(&["verify", "--q", "2", "--n", "2", "--e", "0", "--calibrate", "--window", "6"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["verdict"], "FAIL");
    assert_eq!(run(&["--help"], &[]).status.code(), Some(0));
    assert_eq!(run(&["--version"], &[]).status.code(), Some(0));
}

#[test]
fn output_independent_of_worker_count() {
    let cases: [&[&str]; 3] = [
        &["spectral", "--q", "11", "--d", "2", "--n", "2", "--count", "300", "--seed", "9"],
        &["count", "--q", "3", "--d", "1", "--label", "1,1", "--deg", "0,1", "--window", "3"],
        &["verify", "--q", "2", "--d", "2", "--label", "1,1", "--deg", "1,-1", "--window", "3"],
    ];
    for args in cases {
        let one = run(args, &[("HITCHIN_WORKERS", "1")]);
        let four = run(args, &[("HITCHIN_WORKERS", "4")]);
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn json_round_trips() {
    for args in [
        &["dims", "--g", "1", "--d", "3", "--n", "3"][..],
        &["strata", "--n", "4"],
        &["nilpotent", "--g", "0", "--d", "1", "--n", "3", "--e", "0", "--bound", "2"],
        &["spectral", "--q", "5", "--d", "1", "--a", "0,1;3,0,2", "--refine", "2"],
        &["count", "--q", "2", "--d", "1", "--label", "1,1", "--deg", "0,0", "--chain"],
    ] {
        let o = run(args, &[]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let v = json(&o);
        assert_eq!(format!("{v}\n"), text, "{args:?}");
    }
}

#[test]
fn csv_lists_rows() {
    let o = run(&["strata", "--n", "2", "--format", "csv"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "component_degree_sum,elliptic,lambda,s");
    assert_eq!(lines.len(), 4);
}
