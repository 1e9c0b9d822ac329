use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_asym-ramsey"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn density_reports_exact_fractions() {
    let v = json(&["density", "C~", "--pair", "Cr"]);
    assert_eq!(v["m2"], "5/2");
    assert_eq!(v["pair"]["m2"], "9/4");
    assert_eq!(v["balancedness"]["strictly_two_balanced"], true);
    let table = stdout(&["density", "C~", "--format", "csv"]);
    assert!(table.starts_with("measure,fraction,decimal\n"));
    assert!(table.contains("m2,5/2,2.500000"));
}

#[test]
fn oracle_and_colorer_on_small_cliques() {
    let k6 = json(&["oracle", "E~~w", "--pair", "k3k3"]);
    assert_eq!(k6["verdict"], "invalid");
    assert!(k6.get("coloring").is_none());
    let k5 = json(&["oracle", "D~{", "--pair", "k3k3"]);
    assert_eq!(k5["verdict"], "valid");
    assert_eq!(k5["coloring"].as_array().unwrap().len(), 10);
    let stuck = json(&["color", "E~~w", "--pair", "k3k3"]);
    assert_eq!(stuck["result"], "stuck");
    assert_eq!(stuck["stuck"]["in_cstar"], true);
}

#[test]
fn color_writes_a_jsonl_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let v = json(&["color", "D~{", "--pair-h1", "C~", "--pair-h2", "Cr", "--trace", trace.to_str().unwrap()]);
    assert_eq!(v["result"], "colored");
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count() as u64, v["events"].as_u64().unwrap());
    for line in text.lines() {
        let ev: Value = serde_json::from_str(line).unwrap();
        assert!(ev["step"].is_u64() && ev["action"].is_string());
    }
}

#[test]
fn sweep_is_deterministic_and_writes_to_out() {
    let args = ["sweep", "--pair", "k4c4", "--ns", "10,14", "--bs", "1/2,1", "--trials", "5", "--seed", "3"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert_eq!(a.lines().next().unwrap(), "n,b_num,b_den,p,trials,colored,stuck,oracle_valid,oracle_invalid,budget_exceeded,mean_ms");
    assert_eq!(a.lines().count(), 5);
    let dir = tempfile::tempdir().unwrap();
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", dir.path().to_str().unwrap()]);
    let out = run(&with_out);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), a);
}

#[test]
fn full_pipeline_sweep_keeps_stuck_traces() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["sweep", "--pair", "k3k3", "--ns", "8", "--bs", "2", "--trials", "6", "--mode", "full-pipeline", "--out", d]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let stuck: usize = row[6].parse().unwrap();
    let traces = dir.path().join("traces");
    assert!(stuck > 0);
    let files = if traces.exists() { std::fs::read_dir(traces).unwrap().count() } else { 0 };
    assert_eq!(files, stuck);
}

#[test]
fn trial_and_json_sweep() {
    let v = json(&["trial", "--pair", "k3k3", "--n", "14", "--b", "1", "--seed", "7"]);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["n"], 14);
    let r = json(&["sweep", "--pair", "k4c4", "--ns", "10", "--bs", "1", "--trials", "3", "--format", "json"]);
    assert_eq!(r["rows"].as_array().unwrap().len(), 1);
    assert_eq!(r["rows"][0]["trials"], 3);
}

#[test]
fn grow_audits_a_closed_host() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("g.jsonl");
    let v = json(&["grow", "F~~~w", "--pair", "k4c4", "--cap", "3", "--trace", trace.to_str().unwrap()]);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count() as u64, v["steps"].as_u64().unwrap());
    let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    for key in ["i", "kind", "degenerate", "lambda_before", "lambda_after", "v_added", "e_added"] {
        assert!(first.get(key).is_some(), "{key}");
    }
}

#[test]
fn families_and_regular_certificates() {
    let v = json(&["families", "C~", "--pair", "k3k3"]);
    assert_eq!(v["in_c"], true);
    assert_eq!(v["case"], "equal");
    let cert = json(&["regular-cert", "--v1", "5", "--l1", "4", "--v2", "4", "--l2", "3"]);
    assert_eq!(cert["certificate"]["route"], "Case3V2Le4");
    let by_graphs = json(&["regular-cert", "--h1", "Dhc", "--h2", "EhEG"]);
    assert_eq!(by_graphs["certificate"]["m2_pair"], "25/19");
    let rejected = json(&["regular-cert", "--v1", "4", "--l1", "3", "--v2", "4", "--l2", "3"]);
    assert_eq!(rejected["reason"], "not covered: f = 0");
    let grid = stdout(&["regular-cert", "--sweep", "6", "6"]);
    assert_eq!(grid.lines().next().unwrap(), "v1,l1,v2,l2,f,margin,route");
    assert!(grid.contains("5,2,6,2,"));
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    assert_eq!(run(&["density", "not graph6 !!"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "C~", "--pair", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["regular-cert", "--v1", "5", "--l1", "3", "--v2", "4", "--l2", "3"]).status.code(), Some(2));
    assert_eq!(run(&["color", "C~", "--pair", "k3k3", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["trial", "--pair", "k3k3", "--n", "10", "--b", "1/0"]).status.code(), Some(2));
    // K4 for (K4,C4) is not in the closed family
    assert_eq!(run(&["grow", "C~", "--pair", "k4c4"]).status.code(), Some(2));
}
