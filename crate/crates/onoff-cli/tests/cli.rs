//! End-to-end tests of the command-line interface: schemas, exit codes,
//! determinism, and the reference four-queue instance.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn write_instance(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn moderate_patience_instance(dir: &tempfile::TempDir) -> PathBuf {
    write_instance(
        dir,
        "fig.json",
        r#"{"queues":[
            {"lambda":1.0,"mu":5.0,"theta":5.25},
            {"lambda":1.2,"mu":3.0,"theta":0.75},
            {"lambda":0.4,"mu":2.0,"theta":3.75},
            {"lambda":0.2,"mu":4.0,"theta":3.0}],
            "total_switchover":1.5}"#,
    )
}

fn onoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onoff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn opt_endo_reproduces_the_reference_duration() {
    let dir = tempfile::tempdir().unwrap();
    let inst = moderate_patience_instance(&dir);
    let out = onoff(&["opt-endo", "--instance", inst.to_str().unwrap()]);
    let doc = stdout_json(&out);
    let t2 = doc["T_star"][1].as_f64().unwrap();
    assert!((t2 - 0.66).abs() <= 0.05, "T_2* = {t2}");
    assert_eq!(doc["trace"]["chosen_queue"], 2);
    assert_eq!(doc["trace"]["initial_all_joining"], serde_json::json!([1, 3]));
    assert!(doc["value"].as_f64().unwrap() > doc["trace"]["initial_objective"].as_f64().unwrap());
}

#[test]
fn identical_requests_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let inst = moderate_patience_instance(&dir);
    let path = inst.to_str().unwrap();
    let a = onoff(&["opt-endo", "--instance", path]);
    let b = onoff(&["opt-endo", "--instance", path]);
    assert_eq!(a.stdout, b.stdout);
    let a = onoff(&["eq-endo", "--instance", path, "--T", "0.1,0,0.2,0"]);
    let b = onoff(&["eq-endo", "--instance", path, "--T", "0.1,0,0.2,0"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eq_endo_emits_one_based_sets_and_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let inst = moderate_patience_instance(&dir);
    let out = onoff(&["eq-endo", "--instance", inst.to_str().unwrap(), "--T", "0,0,0,0"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["all_joining_set"], serde_json::json!([1, 3]));
    assert_eq!(doc["pivot_steps"], 1);
    let alpha = doc["alpha"].as_array().unwrap();
    assert!((alpha[0].as_f64().unwrap() - 0.548).abs() < 5e-4);
    // round-trip: the outputs parse under the schema used above
    assert!(doc["throughput"].as_f64().is_some());
    assert!(doc["reward"].as_f64().is_some());
}

#[test]
fn sweep_rises_then_falls_on_the_reference_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = moderate_patience_instance(&dir);
    let out = onoff(&[
        "sweep",
        "--instance",
        inst.to_str().unwrap(),
        "--queue",
        "2",
        "--grid",
        "0:2:0.05",
    ]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = body
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 41);
    let peak = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    assert!(peak > 0 && peak < values.len() - 1, "interior peak, got {peak}");
    assert!(values[..=peak].windows(2).all(|w| w[1] >= w[0] - 1e-9));
    assert!(values[peak..].windows(2).all(|w| w[1] <= w[0] + 1e-9));
}

#[test]
fn validate_reports_ok() {
    let dir = tempfile::tempdir().unwrap();
    let inst = moderate_patience_instance(&dir);
    let out = onoff(&["validate", "--instance", inst.to_str().unwrap()]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.trim_end().ends_with("OK"), "{body}");
}

#[test]
fn invalid_instances_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_instance(
        &dir,
        "bad.json",
        r#"{"queues":[{"lambda":-1.0,"mu":3.0,"tau":0.5,"theta":2.0}]}"#,
    );
    let out = onoff(&["opt-endo", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("lambda"), "stderr: {err}");

    // oversaturated queues cannot run the exhaustive solvers
    let unstable = write_instance(
        &dir,
        "unstable.json",
        r#"{"queues":[
            {"lambda":3.0,"mu":2.0,"tau":0.5,"theta":2.0},
            {"lambda":1.0,"mu":2.0,"tau":0.5,"theta":2.0}]}"#,
    );
    let out = onoff(&["opt-endo", "--instance", unstable.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("utilization"), "stderr: {err}");
}

#[test]
fn eq_exo_trace_and_csv_formats() {
    let dir = tempfile::tempdir().unwrap();
    let single = write_instance(
        &dir,
        "single.json",
        r#"{"queues":[{"lambda":1.0,"mu":2.0,"tau":0.0,"theta":9.5}]}"#,
    );
    let out = onoff(&[
        "eq-exo",
        "--instance",
        single.to_str().unwrap(),
        "--schedule",
        "1:4",
        "--trace-points",
        "8",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["outcomes"][0]["pattern"], "NONEXH_1");
    assert_eq!(doc["outcomes"][0]["k"], 1);
    assert_eq!(doc["outcomes"][0]["trace"].as_array().unwrap().len(), 9);
    assert!((doc["outcomes"][0]["q_min"].as_f64().unwrap() - 2.5).abs() < 1e-9);

    let out = onoff(&[
        "eq-exo",
        "--instance",
        single.to_str().unwrap(),
        "--schedule",
        "1:4",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.starts_with("queue,pattern,"));
    assert!(body.contains("NONEXH_1"));
}

#[test]
fn simulate_csv_has_the_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let inst = moderate_patience_instance(&dir);
    let out = onoff(&[
        "simulate",
        "--instance",
        inst.to_str().unwrap(),
        "--T",
        "0,0,0,0",
        "--dt",
        "0.002",
    ]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    let header = body.lines().next().unwrap();
    assert_eq!(
        header,
        "t,q_1,q_2,q_3,q_4,W_1,W_2,W_3,W_4,join_1,join_2,join_3,join_4,on_1,on_2,on_3,on_4"
    );
    assert!(body.lines().count() > 100);
}

#[test]
fn single_queue_opt_exo_needs_constraints() {
    let dir = tempfile::tempdir().unwrap();
    let single = write_instance(
        &dir,
        "single.json",
        r#"{"queues":[{"lambda":1.0,"mu":2.0,"tau":0.0,"theta":3.0}]}"#,
    );
    let out = onoff(&["opt-exo", "--instance", single.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = onoff(&[
        "opt-exo",
        "--instance",
        single.to_str().unwrap(),
        "--l-max",
        "10",
        "--beta",
        "0.5",
    ]);
    let doc = stdout_json(&out);
    assert!((doc["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((doc["L"][0].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!((doc["T"][0].as_f64().unwrap() - 1.5).abs() < 1e-9);
}

#[test]
fn opt_exo_emits_schedules_and_patterns() {
    let dir = tempfile::tempdir().unwrap();
    let pair = write_instance(
        &dir,
        "pair.json",
        r#"{"queues":[
            {"lambda":1.0,"mu":3.0,"tau":0.5,"theta":10.0},
            {"lambda":1.0,"mu":3.0,"tau":0.5,"theta":10.0}]}"#,
    );
    let out = onoff(&["opt-exo", "--instance", pair.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert!((doc["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let patterns = doc["patterns"].as_array().unwrap();
    assert_eq!(patterns.len(), 2);
    for p in patterns {
        let p = p.as_str().unwrap();
        assert!(p == "EXH_A" || p == "EXH_D", "pattern {p}");
    }
}

#[test]
fn serve_forever_sentinel_spelled_as_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(
        &dir,
        "hold.json",
        r#"{"queues":[
            {"lambda":2.0,"mu":2.5,"tau":2.0,"theta":0.2},
            {"lambda":0.3,"mu":2.5,"tau":2.0,"theta":0.2}]}"#,
    );
    let out = onoff(&["opt-endo", "--instance", inst.to_str().unwrap()]);
    let doc = stdout_json(&out);
    assert_eq!(doc["T_star"][0], "infinity");
    assert_eq!(doc["value"].as_f64().unwrap(), 2.0);

    // and the sentinel is accepted back on input
    let out = onoff(&[
        "eq-endo",
        "--instance",
        inst.to_str().unwrap(),
        "--T",
        "infinity,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("finite"), "stderr: {err}");
}
