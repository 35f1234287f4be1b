use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fiet::rauzy::rauzy_step;
use fiet::wire::{FietJson, StepJson};
use tempfile::TempDir;

const SAMPLE: &str = r#"{"n":3,"pi0":[1,2,3],"pi1":[2,3,1],"flips":[1,3],"lengths":["1/1","5/1","4/1"]}"#;

fn fiet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiet")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn verify_relaxed_schedule_succeeds() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "relaxed.json", r#"{"d":128,"p1_1":256,"mode":"relaxed"}"#);
    let out = fiet(&["verify", "--config", s(&cfg), "--depth", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("114 of 114 records hold"));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["all_hold"], true);
}

#[test]
fn empty_schedule_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "empty.json", "{}");
    let out = fiet(&["verify", "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("d"));
}

#[test]
fn small_first_exponent_is_reported_as_unsupported() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "small.json", r#"{"d":128,"p1_1":10,"mode":"relaxed"}"#);
    let out = fiet(&["verify", "--config", s(&cfg), "--depth", "1"]);
    let err = stderr(&out);
    assert!(err.contains("unsupported proof margin") && err.contains("p1"), "{err}");
}

#[test]
fn construct_reports_exact_sums_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "relaxed.json", r#"{"d":128,"p1_1":256,"mode":"relaxed"}"#);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for target in [&a, &b] {
        let out = fiet(&["construct", "--config", s(&cfg), "--depth", "2", "--out", s(target)]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["lambda2", "lambda5", "lambda7", "alpha"] {
        assert_eq!(v[key]["sum"], "1/1");
    }
    assert_eq!(v["m"], 2);
    assert_eq!(v["contraction"].as_array().unwrap().len(), 2);
}

#[test]
fn construct_strict_single_block_completes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "strict.json", r#"{"d":125001,"p1_1":125002,"mode":"strict"}"#);
    let out = fiet(&["construct", "--config", s(&cfg), "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["complete"], true);
}

#[test]
fn step_matches_the_library() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "f.json", SAMPLE);
    let out = fiet(&["step", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let f = FietJson::parse(SAMPLE).unwrap();
    let (next, outcome) = rauzy_step(&f).unwrap();
    let expected = serde_json::to_string_pretty(&StepJson::new(&outcome, Some(&next))).unwrap() + "\n";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn empty_path_echoes_the_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "f.json", SAMPLE);
    let out = fiet(&["step", "--input", s(&input), "--path", ""]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let back: serde_json::Value = serde_json::from_str(SAMPLE).unwrap();
    assert_eq!(v, back);
}

#[test]
fn equal_rightmost_lengths_fail_the_step() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "f.json", r#"{"n":2,"pi0":[1,2],"pi1":[2,1],"flips":[],"lengths":["3","3"]}"#);
    let out = fiet(&["step", "--input", s(&input)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn path_gamma_reaches_the_shifted_datum() {
    let out = fiet(&["path", "--gamma", "2,3,4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let text = v.to_string();
    assert!(text.contains("[1,4,2,3,5,6,7,8]") && text.contains("[3,5,6,7,4,1,8,2]"), "{text}");
}

#[test]
fn simulate_horizon_one_gives_indicators() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "relaxed.json", r#"{"d":128,"p1_1":256,"mode":"relaxed"}"#);
    let run = || fiet(&["simulate", "--config", s(&cfg), "--depth", "1", "--horizons", "1"]);
    let out = run();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text, stdout(&run()));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    let first = headers.iter().position(|h| h == "f1").unwrap();
    let mut rows = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        let freqs: Vec<&str> = (first..first + 8).map(|i| &rec[i]).collect();
        // the datum's domain row is 1..8, so midpoint i lies in subinterval i + 1
        assert_eq!(freqs[rows], "1/1", "{freqs:?}");
        assert_eq!(freqs.iter().filter(|f| **f == "0/1" || **f == "0").count(), 7, "{freqs:?}");
        rows += 1;
    }
    assert_eq!(rows, 8);
}

#[test]
fn oracle_command_reports_no_mismatch() {
    let out = fiet(&["oracle", "--trials", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passes"], 50);
}
