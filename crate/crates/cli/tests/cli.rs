use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn freeprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeprob"))
        .args(args)
        .env_remove("FREEPROB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn partitions_counts_noncrossing() {
    let out = freeprob(&["partitions", "--n", "4", "--kind", "nc"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("14"));
}

#[test]
fn partitions_counts_interval() {
    let out = freeprob(&["partitions", "--n", "5", "--kind", "int"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("16"));
}

#[test]
fn characterize_rejects_violated_guard() {
    let out = freeprob(&["characterize", "--case", "1,-1", "--c", "1", "--d", "0.5", "--gamma", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cd>1 violated"));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(v["error"]["kind"], "domain");
}

#[test]
fn characterize_round_trip_passes() {
    let out = freeprob(&["characterize", "--lambda", "3", "--alpha", "2", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert_eq!(v["checks"].as_array().unwrap().len(), 9);
}

#[test]
fn characterize_reports_missing_constant() {
    let out = freeprob(&["characterize", "--case", "1,2", "--c", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["path"], "b");
}

#[test]
fn characterize_rejects_partial_triple() {
    let out = freeprob(&["characterize", "--lambda", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn my_verify_passes_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("my.csv");
    let out = freeprob(&["my-verify", "--lambda", "2", "--alpha", "1", "--beta", "1", "--csv", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    assert_eq!(header(&csv), "check,z_re,z_im,lhs_re,lhs_im,rhs_re,rhs_im,residual,bound,pass");
}

#[test]
fn identity_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("id.csv");
    let out = freeprob(&["identity-check", "--csv", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
    assert_eq!(
        header(&csv),
        "series,z_re,z_im,n,partial_re,partial_im,closed_re,closed_im,residual,tail_bound,pass"
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    for s in ["D,", "C,", "A,", "B,"] {
        assert!(text.lines().any(|l| l.starts_with(s)), "no {s} rows");
    }
}

#[test]
fn convolve_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let svg = dir.path().join("c.svg");
    let out = freeprob(&["convolve", "--csv", path_str(&csv), "--svg", path_str(&svg)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(header(&csv), "x,density");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 402);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn subord_passes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = freeprob(&["subord", "--csv", path_str(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        header(&csv),
        "z_re,z_im,omega1_re,omega1_im,omega2_re,omega2_im,g_re,g_im,residual,bound,pass"
    );
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let out = freeprob(&["my-verify", "--csv", path_str(&csv)]);
        (out.stdout, std::fs::read(&csv).unwrap())
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_freeprob"))
            .args(["subord"])
            .env("FREEPROB_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn show_defaults_prints_configuration() {
    let out = freeprob(&["my-verify", "--show-defaults"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["lambda"], 2.0);
    assert_eq!(v["regression_tol"], 1e-6);
}

#[test]
fn config_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema": 1, "command": "partitions", "n": 5, "kind": "nc"}"#).unwrap();
    let out = freeprob(&["partitions", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().next(), Some("42"));
}

#[test]
fn unknown_config_key_exits_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema": 1, "command": "subord", "bogus": 3}"#).unwrap();
    let out = freeprob(&["subord", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "schema");
    assert_eq!(v["error"]["path"], "bogus");
}

#[test]
fn nested_type_error_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema": 1, "command": "subord", "z": {"start": 0, "end": 1, "count": "x", "im": 1}}"#)
        .unwrap();
    let out = freeprob(&["subord", "--config", path_str(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["path"], "z.count");
}

#[test]
fn wrong_schema_or_command_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema": 2, "command": "subord"}"#).unwrap();
    assert_eq!(freeprob(&["subord", "--config", path_str(&cfg)]).status.code(), Some(2));
    std::fs::write(&cfg, r#"{"schema": 1, "command": "convolve"}"#).unwrap();
    assert_eq!(freeprob(&["subord", "--config", path_str(&cfg)]).status.code(), Some(2));
}

#[test]
fn invalid_thread_count_exits_2() {
    let out = Command::new(env!("CARGO_BIN_EXE_freeprob"))
        .args(["partitions", "--n", "3"])
        .env("FREEPROB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_flag_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = freeprob(&["subord", "--json", path_str(&path)]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, json(&out));
}

#[test]
fn rmt_rejects_small_dimension() {
    let out = freeprob(&["rmt", "--dim", "128", "--reps", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "domain");
}

#[test]
fn rmt_small_run_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let out = freeprob(&["rmt", "--dim", "256", "--reps", "10", "--csv", path_str(&csv)]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let v = json(&out);
    assert_eq!(v["reps"], 10);
    assert!(v["checks"].is_array());
    assert_eq!(header(&csv), "rep,statistic,value");
}
