use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn rtau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtau"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn analyze_golden_regular_text() {
    let o = rtau(&["analyze", &path("golden_regular.rtau")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("N = 5"), "{out}");
    assert!(out.contains("S = {3}"));
    assert!(out.contains("kernel basis: {1, x, x^5 + 10x^3}"));
    assert!(out.contains("[ok]"));
}

#[test]
fn analyze_golden_regular_matches_pinned_json() {
    let o = rtau(&["analyze", &path("golden_regular.rtau"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let pinned: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("golden_regular.analyze.json")).unwrap()).unwrap();
    assert_eq!(json(&o), pinned);
}

#[test]
fn analyze_golden_derived_reports_derived_singular() {
    let o = rtau(&["analyze", &path("golden_derived.rtau")]);
    assert!(stdout(&o).contains("derived-singular present: yes"));
}

#[test]
fn analyze_identity() {
    let o = rtau(&["--format", "json", "analyze", &path("identity.rtau")]);
    let v = json(&o);
    assert_eq!(v["cutoff"], -1);
    assert_eq!(v["inaccessible"], serde_json::json!([]));
    assert_eq!(v["kernel"], serde_json::json!([]));
}

#[test]
fn canonical_golden_derived_matches_pinned_json() {
    let o = rtau(&["canonical", &path("golden_derived.rtau"), "--bound", "6", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let pinned: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("golden_derived.canonical.json")).unwrap()).unwrap();
    assert_eq!(v, pinned);
    let row4 = v["entries"].as_array().unwrap().iter().find(|e| e["m"] == 4).unwrap();
    assert_eq!(row4["class"], "primary_generic");
    assert_eq!(row4["r"], serde_json::json!(["0/1", "0/1", "0/1", "4/3"]));
}

#[test]
fn canonical_golden_regular_residuals() {
    let o = rtau(&["canonical", &path("golden_regular.rtau"), "--bound", "5", "--format", "json"]);
    let v = json(&o);
    let ms: Vec<u64> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["m"].as_u64().unwrap())
        .collect();
    assert_eq!(ms, [0, 1, 2, 4, 5]);
    // zero below 5; D(x^7/84) = x^5 + 10x^3 and the residual is unique, so r5 = 10x^3
    for e in v["entries"].as_array().unwrap() {
        let expected = if e["m"] == 5 {
            serde_json::json!(["0/1", "0/1", "0/1", "10/1"])
        } else {
            serde_json::json!([])
        };
        assert_eq!(e["r"], expected, "m = {}", e["m"]);
    }
}

#[test]
fn solve_second_derivative_boundary_problem() {
    let o = rtau(&[
        "solve",
        &path("second_derivative.rtau"),
        "--order",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["y"], serde_json::json!(["0/1", "1/1"]));
    assert_eq!(v["taus"], serde_json::json!([]));
    assert_eq!(v["residual"]["exact"], true);
}

#[test]
fn solve_uses_order_from_file() {
    let o = rtau(&["solve", &path("golden_derived.rtau"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["order"], 7);
    assert_eq!(v["system_size"], 5);
    assert_eq!(v["taus"].as_array().unwrap().len(), 2);
    assert_eq!(v["residual"]["equation"], serde_json::json!([]));
}

#[test]
fn solve_below_cutoff_is_a_domain_error() {
    let o = rtau(&["solve", &path("golden_derived.rtau"), "--order", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("order must exceed N=5"));
}

#[test]
fn solve_without_order_is_a_usage_error() {
    let o = rtau(&["solve", &path("second_derivative.rtau")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_golden_regular_passes() {
    let o = rtau(&["check", &path("golden_regular.rtau")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all checks passed"));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let o = rtau(&["analyze", &path("malformed.rtau")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 9"));
    let o = rtau(&["analyze", &path("does-not-exist.rtau")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_operator_is_rejected() {
    let dir = std::env::temp_dir().join(format!("rtau-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("zero.rtau");
    std::fs::write(&file, "[operator]\nd3 = 0\n").unwrap();
    let o = rtau(&["analyze", &file.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}
