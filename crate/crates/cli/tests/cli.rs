use std::path::Path;
use std::process::{Command, Output};

use mincad::serialize::{canonical_key, from_json, to_json};
use tempfile::TempDir;

const LINE: &str = r#"{"dimension": 1, "variables": ["x"],
 "sets": [{"name": "pair", "polynomials": [[[[2], 1], [[0], -1]]]}],
 "options": {"extraPolynomials": [[[[1], 1]]]}}"#;

const CIRCLE_WITH_LINE: &str = r#"{"dimension": 2, "variables": ["x", "y"],
 "sets": [{"name": "circle", "polynomials": [[[[2, 0], "1"], [[0, 2], "1"], [[0, 0], "-1"]]]}],
 "options": {"extraPolynomials": [[[[1, 0], "1"]]]}}"#;

const ELLIPSE: &str = r#"{"dimension": 2, "variables": ["x", "y"],
 "sets": [{"name": "ellipse", "polynomials": [[[[2, 0], 1], [[0, 2], 4], [[1, 1], 1], [[0, 0], -4]]]}],
 "options": {"extraPolynomials": [[[[1, 0], 1]], [[[0, 1], 1]]]}}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn minimize(problem: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minimize"))
        .arg(problem)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn text_report_lists_level_counts() {
    let dir = TempDir::new().unwrap();
    let o = minimize(&write(&dir, "line.json", LINE), &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("level 1: 7 cells"), "{out}");
    assert!(out.contains("level 1: 5 cells"), "{out}");
}

#[test]
fn json_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let o = minimize(&write(&dir, "c.json", CIRCLE_WITH_LINE), &["--out", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let cad = from_json(&out).unwrap();
    assert_eq!(cad.level_counts(), vec![5, 13]);
    assert_eq!(from_json(&to_json(&cad)).map(|c| canonical_key(&c)).unwrap(), canonical_key(&cad));
}

#[test]
fn exhaustive_dot_has_one_normal_form() {
    let dir = TempDir::new().unwrap();
    let o = minimize(
        &write(&dir, "c.json", CIRCLE_WITH_LINE),
        &["--mode", "exhaustive", "--out", "dot"],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("doublecircle").count(), 1);
}

#[test]
fn trace_file_records_reductions() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("trace.json");
    let o = minimize(
        &write(&dir, "c.json", CIRCLE_WITH_LINE),
        &["--trace", trace.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(trace).unwrap()).unwrap();
    let steps = v.as_array().unwrap();
    assert!(!steps.is_empty());
    assert_eq!(steps[0]["cellsBefore"], 23);
    assert_eq!(steps.last().unwrap()["cellsAfter"], 13);
    assert!(steps.iter().any(|s| s["level"] == 1));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let o = minimize(&write(&dir, "bad.json", "{\"dimension\": 1"), &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = minimize(&write(&dir, "bad.json", r#"{"dimension": 5, "variables": [], "sets": []}"#), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_with_four() {
    let dir = TempDir::new().unwrap();
    let o = minimize(
        &write(&dir, "e.json", ELLIPSE),
        &["--mode", "exhaustive", "--budget-nodes", "2"],
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("incomplete"));
}

#[test]
fn missing_file_is_reported() {
    let o = minimize(Path::new("/nonexistent/problem.json"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}
