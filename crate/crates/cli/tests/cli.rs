use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hypermatch(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermatch")).args(args).current_dir(dir).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypermatch(&["gen", "--family", "hm", "--n", "7", "--k", "3", "--s", "1"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("3 7 13\n"), "{text}");
    std::fs::write(dir.path().join("hm.hg"), text).unwrap();
    let nu = json(&hypermatch(&["solve", "--in", "hm.hg", "--what", "nu"], dir.path()));
    assert_eq!(nu["value"], 1);
    let tau = json(&hypermatch(&["solve", "--in", "hm.hg", "--what", "tau"], dir.path()));
    assert_eq!(tau["value"], 2);
    let d = json(&hypermatch(&["solve", "--in", "hm.hg", "--what", "duality", "--mode", "rational"], dir.path()));
    assert_eq!(d["nu_star"], d["tau_star"]);
}

#[test]
fn bounds_tsv() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypermatch(&["bounds", "--n", "10", "--k", "3", "--s", "2", "--format", "tsv"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("10\t3\t2\t64\t56\t55"), "{text}");
}

#[test]
fn shift_and_stabilize() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.hg"), "3 4 1\n2 3 4\n").unwrap();
    let one = json(&hypermatch(&["shift", "--in", "g.hg", "--i", "1", "--j", "2"], dir.path()));
    assert_eq!(one["moved"], 1);
    let all = json(&hypermatch(&["shift", "--in", "g.hg", "--out", "s.hg"], dir.path()));
    assert_eq!(all["stable"], true);
    let shifted = std::fs::read_to_string(dir.path().join("s.hg")).unwrap();
    assert_eq!(shifted.lines().nth(1), Some("1 2 3"));
}

#[test]
fn closeness_and_crossover() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypermatch(&["gen", "--family", "cover", "--n", "9", "--k", "3", "--s", "2", "--out", "c.hg"], dir.path());
    assert!(out.status.success());
    let c = json(&hypermatch(&["closeness", "--in", "c.hg", "--s", "2", "--target", "cover"], dir.path()));
    assert_eq!(c["missing_edges"], 0);
    let x = json(&hypermatch(&["crossover"], dir.path()));
    let root = x["root"].as_f64().unwrap();
    assert!((root - (-3.0 + 321f64.sqrt()) / 52.0).abs() < 1e-10);
    let table = hypermatch(&["crossover", "--n", "30", "--format", "tsv"], dir.path());
    assert!(table.status.success());
    assert_eq!(String::from_utf8(table.stdout).unwrap().lines().count(), 1 + 9);
}

#[test]
fn round_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypermatch(&["gen", "--family", "complete", "--n", "12", "--k", "3", "--out", "k.hg"], dir.path());
    assert!(out.status.success());
    let r = json(&hypermatch(
        &["round", "--in", "k.hg", "--s", "3", "--seed", "4", "--strategy", "nibble", "--report", "r.json"],
        dir.path(),
    ));
    assert_eq!(r["success"], true);
    assert_eq!(r["matching_size"], 4);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(report["stages"].as_array().unwrap().len() >= 6);
    assert!(report["sample"]["deviations"].is_array());
}

#[test]
fn verify_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&hypermatch(&["verify", "--n", "6", "--k", "2", "--s", "2", "--constraint", "nu-le-s"], dir.path()));
    assert_eq!(v["max_edges_found"], 10);
    assert_eq!(v["matches_bound"], true);
    let big = hypermatch(&["verify", "--n", "7", "--k", "3", "--s", "1", "--method", "exhaustive"], dir.path());
    assert_eq!(big.status.code(), Some(2));
    let missing = hypermatch(&["solve", "--in", "nope.hg", "--what", "nu"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
}
