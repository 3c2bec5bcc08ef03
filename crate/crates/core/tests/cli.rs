use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn canmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canmod")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn corpus_file(dir: &Path, name: &str) -> String {
    write(dir, &format!("{name}.curve"), canmod::corpus::bundled(name).unwrap())
}

#[test]
fn analyze_json_is_deterministic_and_reports_the_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus_file(dir.path(), "E4");
    let a = canmod(&["analyze", &f, "--json"]);
    let b = canmod(&["analyze", &f, "--json"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["curve"]["genus"], 3);
    assert!(v.get("settings").is_some());
}

#[test]
fn analyze_text_summary_names_the_curve() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus_file(dir.path(), "E3");
    let o = canmod(&["analyze", &f, "--no-clifford"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("E3"));
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus_file(dir.path(), "E2");
    let out = dir.path().join("e2.json");
    let o = canmod(&["verify", &f, "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["curve"], "E2");
    assert!(v["theorems"].as_array().unwrap().len() >= 5);
}

#[test]
fn syntax_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.curve", "field Q\npoint P branches [0 semigroup\n");
    let o = canmod(&["analyze", &f, "--json"]);
    assert_eq!(code(&o), 2);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.get("error").is_some(), "{v}");
}

#[test]
fn invalid_data_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "gcd.curve", "field Q\npoint P branches [0] semigroup [2, 4]\n");
    assert_eq!(code(&canmod(&["analyze", &f])), 3);
    let low = write(dir.path(), "low.curve", "field Q\npoint N branches [1, 2] node\n");
    assert_eq!(code(&canmod(&["analyze", &low])), 3);
}

#[test]
fn exhausted_degree_cap_exits_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus_file(dir.path(), "E3");
    assert_eq!(code(&canmod(&["analyze", &f, "--max-degree", "1"])), 4);
}

#[test]
fn construct_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    for (args, genus) in [
        (vec!["construct", "cone", "3"], 3),
        (vec!["construct", "serre", "0:2", "1:2"], 3),
        (vec!["construct", "semigroup", "3", "5", "--at", "-1"], 4),
    ] {
        let out = dir.path().join("c.curve");
        let mut full = args.clone();
        full.extend(["--out", out.to_str().unwrap()]);
        assert_eq!(code(&canmod(&full)), 0, "{args:?}");
        let o = canmod(&["analyze", out.to_str().unwrap(), "--json", "--no-clifford"]);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["curve"]["genus"], genus, "{args:?}");
    }
}

#[test]
fn corpus_directory_runs_every_file() {
    let dir = tempfile::tempdir().unwrap();
    for (name, _) in canmod::corpus::BUNDLED {
        corpus_file(dir.path(), name);
    }
    let out = dir.path().join("reports");
    let o = canmod(&["corpus", dir.path().to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    for (name, _) in canmod::corpus::BUNDLED {
        assert!(out.join(format!("{name}.json")).exists());
    }
    assert!(out.join("summary.json").exists());
}

#[test]
fn corrupt_file_in_a_corpus_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    corpus_file(dir.path(), "E1");
    write(dir.path(), "broken.curve", "point ??\n");
    let o = canmod(&["corpus", dir.path().to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("broken"));
}

#[test]
fn empty_corpus_directory_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&canmod(&["corpus", dir.path().to_str().unwrap()])), 0);
}
