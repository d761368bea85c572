//! End-to-end checks of the binary: exit codes, JSON shape, batch
//! behavior on malformed input.

use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chromabound"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn chromatic_k4_polynomial() {
    let out = run(&["chromatic", "--gen", "complete:4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["agreement"], true);
    let coeffs: Vec<&str> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert_eq!(coeffs, ["0", "-6", "11", "-6", "1"]);
}

#[test]
fn chromatic_from_edge_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k4.edges");
    fs::write(&path, "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let out = run(&["chromatic", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_c4_exit_zero() {
    let out = run(&[
        "verify",
        "--gen",
        "cycle:4",
        "--k",
        "3",
        "--random-lists",
        "k=3,universe=5,seed=7",
        "--eta",
        "canonical",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let entries = v["report"]["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    assert!(entries
        .iter()
        .all(|e| e["verdict"] != serde_json::json!("violated")));
}

#[test]
fn count_with_bad_lists_file_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.lists");
    // vertex 2 missing for a 3-vertex graph
    fs::write(&path, "0: 1 2\n1: 1 2\n").unwrap();
    let out = run(&[
        "count",
        "--gen",
        "path:3",
        "--lists",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_budget_refusal_exits_3() {
    let out = run(&[
        "count",
        "--gen",
        "cycle:3",
        "--random-lists",
        "k=2,universe=4,seed=1",
        "--budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn budget_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_chromabound"))
        .args([
            "count",
            "--gen",
            "cycle:3",
            "--random-lists",
            "k=2,universe=4,seed=1",
        ])
        .env("CHROMABOUND_BUDGET", "1")
        .output()
        .expect("spawn binary");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn qpoly_edge_out_of_range_is_usage_error() {
    let out = run(&["qpoly", "--gen", "cycle:3", "--edge", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn two_graph_sources_rejected() {
    let out = run(&["chromatic", "--gen", "cycle:3", "--graph6", "Bw"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gap_command_reports_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k2.lists");
    fs::write(&path, "0: 1 2\n1: 2 3\n").unwrap();
    let out = run(&[
        "gap",
        "--gen",
        "path:2",
        "--lists",
        path.to_str().unwrap(),
        "--k",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["gap"], "1");
    assert_eq!(v["p_gk"], "2");
}

#[test]
fn search_min_k24_finds_zero() {
    let out = run(&[
        "search-min",
        "--gen",
        "kb:2,4",
        "--k",
        "2",
        "--universe",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["value"], "0");
    assert_eq!(v["exhaustive"], true);
}

#[test]
fn scan_flags_guaranteed_rows() {
    // all rows with k >= m-1 equal -> exit 0
    let out = run(&["scan", "--gen", "complete:3", "--k-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn batch_with_corrupt_line_continues() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mix.g6");
    fs::write(&path, "Bw\n!!notgraph6!!\nCF\n").unwrap();
    let out = run(&[
        "batch",
        "--graph6-file",
        path.to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["graphs"], 3);
    assert_eq!(v["summary"]["errors"], 1);
    assert_eq!(v["summary"]["violated"], 0);
    let graphs = v["graphs"].as_array().unwrap();
    assert!(graphs[1].get("error").is_some());
    assert!(graphs[0].get("report").is_some());
    assert!(graphs[2].get("report").is_some());
}

#[test]
fn batch_empty_stream_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.g6");
    fs::write(&path, "").unwrap();
    let out = run(&["batch", "--graph6-file", path.to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["graphs"], 0);
}

#[test]
fn verify_output_is_deterministic() {
    let args = [
        "verify",
        "--gen",
        "cycle:5",
        "--k",
        "4",
        "--eta",
        "random:3",
        "--random-lists",
        "k=4,universe=8,seed=2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_cor12_target() {
    let out = run(&[
        "verify",
        "--gen",
        "path:3",
        "--k",
        "2",
        "--target",
        "cor1.2",
        "--universe",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["entries"][0]["id"], "cor1.2");
    assert_eq!(v["report"]["entries"][0]["verdict"], "holds");
}
