//! End-to-end smoke tests of the `cutstream` binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutstream"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cutstream-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_graph(dir: &PathBuf, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn gen_is_deterministic_and_loads_back() {
    let dir = tmpdir("gen");
    for _ in 0..2 {
        let out = bin()
            .args(["gen", "gnp", "--n", "20", "--p", "0.5", "--out"])
            .arg(&dir)
            .args(["--seed", "7"])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let graph_file = dir.join("gnp-20-7.txt");
    let first = std::fs::read(&graph_file).unwrap();
    // Regenerate and compare bytes.
    let out = bin()
        .args(["gen", "gnp", "--n", "20", "--p", "0.5", "--out"])
        .arg(&dir)
        .args(["--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&graph_file).unwrap(), "byte-identical across runs");
    assert!(dir.join("gnp-20-7.manifest.json").exists());
}

#[test]
fn mincut_matches_oracle_on_a_dumbbell() {
    let dir = tmpdir("mincut");
    let out = bin()
        .args(["gen", "dumbbell", "--k", "12", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let graph = dir.join("dumbbell-12.txt");

    let oracle = bin().args(["oracle", "mincut"]).arg(&graph).output().unwrap();
    assert!(oracle.status.success());
    let oracle_json: serde_json::Value = serde_json::from_slice(&oracle.stdout).unwrap();
    assert_eq!(oracle_json["value"], 1.0);

    let mc = bin()
        .args(["--json", "--seed", "3", "mincut", "--eps", "0.2"])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(mc.status.success(), "{}", String::from_utf8_lossy(&mc.stderr));
    let v: serde_json::Value = serde_json::from_slice(&mc.stdout).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() <= 0.2, "value {value}");
    assert_eq!(v["crossing_edges"].as_array().unwrap().len(), 1);
}

#[test]
fn random_order_reports_all_cycle_cuts() {
    let dir = tmpdir("ro");
    bin().args(["gen", "cycle", "--n", "10", "--out"]).arg(&dir).output().unwrap();
    let graph = dir.join("cycle-10.txt");
    let out = bin()
        .args(["--json", "--shuffle", "5", "mincut-random-order"])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], 2);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 45, "all pairs of cut positions");
}

#[test]
fn sparsify_writes_graph_and_sidecar() {
    let dir = tmpdir("sparsify");
    bin().args(["gen", "gnp", "--n", "30", "--p", "0.4", "--out"]).arg(&dir).args(["--seed", "2"]).output().unwrap();
    let graph = dir.join("gnp-30-2.txt");
    let prefix = dir.join("sparse");
    let out = bin()
        .args(["sparsify", "--mode", "foreach", "--eps", "0.5", "--out"])
        .arg(&prefix)
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("sparse.txt")).unwrap();
    let h = cutstream::graph::parse_graph_text(&text).unwrap();
    assert!(h.m() > 0);
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("sparse.json")).unwrap()).unwrap();
    assert_eq!(sidecar["kind"], "ForEach");
    assert_eq!(sidecar["source_edge_ids"].as_array().unwrap().len(), h.m());
}

#[test]
fn effres_emits_csv_for_requested_pairs() {
    let dir = tmpdir("effres");
    bin().args(["gen", "cycle", "--n", "4", "--out"]).arg(&dir).output().unwrap();
    let graph = dir.join("cycle-4.txt");
    let pairs = write_graph(&dir, "pairs.txt", "0 1\n0 2\n");
    let out = bin()
        .args(["effres", "--eps", "0.3", "--pairs"])
        .arg(&pairs)
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,v,estimate");
    assert_eq!(lines.len(), 3);
    let r01: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((r01 - 0.75).abs() <= 0.3 * 0.75, "C4 adjacent pair: {r01}");
}

#[test]
fn space_log_flag_dumps_csv() {
    let dir = tmpdir("spacelog");
    bin().args(["gen", "gnp", "--n", "24", "--p", "0.4", "--out"]).arg(&dir).args(["--seed", "4"]).output().unwrap();
    let graph = dir.join("gnp-24-4.txt");
    let log = dir.join("space.csv");
    let out = bin()
        .args(["--space-log"])
        .arg(&log)
        .args(["sparsify", "--mode", "forall", "--eps", "0.5"])
        .arg(&graph)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&log).unwrap();
    assert!(csv.starts_with("step,live_words,peak_words,component"));
    assert!(csv.lines().count() > 1);
}

#[test]
fn accept_single_criterion_exits_zero() {
    let out = bin().args(["accept", "--only", "5"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS criterion 5"));
}

#[test]
fn rejects_malformed_graphs() {
    let dir = tmpdir("badgraph");
    let bad = write_graph(&dir, "bad.txt", "3 2\n0 1\n0 9\n");
    let out = bin().args(["oracle", "mincut"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
}
