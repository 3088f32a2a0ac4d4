use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn biclaw(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_biclaw"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn generated(spec: &str) -> String {
    let out = biclaw(&["gen", spec], "");
    assert_eq!(out.status.code(), Some(0));
    String::from_utf8(out.stdout).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn k33_is_s33_free() {
    let out = biclaw(&["check", "--t", "3"], &generated("named:name=k33"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["biclaw_free"], true);
    assert!(v["witness"].is_null());
}

#[test]
fn check_reports_a_witness() {
    let out = biclaw(&["check", "--a", "3", "--b", "3"], &generated("biclaw:a=3,b=3"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["biclaw_free"], false);
    assert!(v["witness"].as_str().unwrap().starts_with("biclaw x="));
}

#[test]
fn six_cycle_is_hamiltonian() {
    let out = biclaw(&["hamilton"], &generated("named:name=c6"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hamiltonian"], true);
    assert_eq!(v["cycle"].as_str().unwrap().split_whitespace().count(), 6);
}

#[test]
fn path_fails_with_a_stage_tag() {
    let out = biclaw(&["hamilton"], &generated("named:name=p4"));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["hamiltonian"], false);
    assert!(v["stage"].is_string());
    assert!(v["error"]["kind"].is_string());
}

#[test]
fn hamilton_result_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let graph = generated("complete_minus_sparse:n=20,removal=2,t=3,seed=7");

    let out = biclaw(&["hamilton"], &graph);
    assert_eq!(out.status.code(), Some(0));
    let result_path = dir.path().join("result.json");
    std::fs::write(&result_path, &out.stdout).unwrap();

    let ok = biclaw(&["verify", "--result", result_path.to_str().unwrap()], &graph);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let bad = biclaw(&["verify", "--cycle", "X0 Y0 X1 Y1"], &graph);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_accepts_biclaw_records() {
    let graph = generated("biclaw:a=2,b=1");
    let check = json(&biclaw(&["check", "--a", "2", "--b", "1"], &graph));
    let record = check["witness"].as_str().unwrap().to_string();
    let out = biclaw(&["verify", "--biclaw", &record], &graph);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn generator_output_is_reproducible() {
    let a = generated("random_bipartite:n=12,p=0.4,seed=99");
    let b = generated("random_bipartite:n=12,p=0.4,seed=99");
    let c = generated("random_bipartite:n=12,p=0.4,seed=100");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn analyze_reports_structure() {
    let out = biclaw(&["analyze", "--eps", "0.01,0.2"], &generated("cycle:n=4"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["edge_count"], 8);
    assert_eq!(v["diameter"], 4);
    assert!(v["u_sizes"]["0.2"].is_number());
}

#[test]
fn oracle_subcommand_matches_hamilton() {
    let out = biclaw(&["oracle", "--kind", "hamilton"], &generated("named:name=c8"));
    assert_eq!(out.status.code(), Some(0));
    let out = biclaw(&["oracle", "--kind", "hamilton"], &generated("named:name=p4"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["hamiltonian"], false);
    assert!(v["cycle"].is_null());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(biclaw(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(biclaw(&["check", "--t", "x"], "").status.code(), Some(1));
    assert_eq!(biclaw(&["check"], "bip 2 2 1\ne 9 9\n").status.code(), Some(1));
    assert_eq!(biclaw(&["gen", "nonsense:n=3"], "").status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = biclaw(&["--help"], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("hamilton"));
}

#[test]
fn experiment_writes_csv() {
    let out = biclaw(
        &["experiment", "--spec", "named:name=c6", "--spec", "named:name=p4", "--eps", "0.01", "--t", "2"],
        "",
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    assert_eq!(&headers[0], "spec");
    assert_eq!(rows.records().count(), 2);
}
