//! End-to-end tests of the binary: output contracts, exit codes,
//! determinism, and the JSON round trip.

use denumerant_cli::output::QuasiPolyDoc;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_denumerant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn compute_emits_expected_coefficients() {
    let out = run(&["compute", "--a", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: QuasiPolyDoc = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc.a, vec![1, 2]);
    assert_eq!(doc.r, 2);
    assert_eq!(doc.d, 2);
    assert_eq!(doc.coeffs["0,1"], "1/2");
    assert_eq!(doc.coeffs["0,2"], "1");
    assert_eq!(doc.coeffs["1,1"], "1/2");
    assert_eq!(doc.coeffs["1,2"], "1/2");
    assert_eq!(doc.certified_up_to, 200);
}

#[test]
fn compute_unit_instance() {
    let out = run(&["compute", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: QuasiPolyDoc = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc.coeffs["0,1"], "1");
}

#[test]
fn compute_composite_period_needs_search_flag() {
    let out = run(&["compute", "--a", "1,2,4"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("composite"), "stderr: {stderr}");
    // with --search the same instance computes and certifies
    let out = run(&["compute", "--a", "1,2,4", "--search", "--n-max", "100"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn eval_examples() {
    let out = run(&["eval", "--a", "1,2,3", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "7");

    let out = run(&["eval", "--a", "2", "--n", "5"]);
    assert_eq!(stdout(&out).trim(), "0");

    let out = run(&["eval", "--a", "1", "--n", "0"]);
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn json_output_is_byte_deterministic() {
    let first = run(&["compute", "--a", "2,3", "--search"]);
    let second = run(&["compute", "--a", "2,3", "--search"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_roundtrip_evaluates_identically() {
    let out = run(&["compute", "--a", "1,2"]);
    let doc: QuasiPolyDoc = serde_json::from_str(&stdout(&out)).expect("valid json");
    let qp = doc.to_quasipoly().expect("rebuildable");
    // against a fresh computation through the library
    let inst = denumerant::PartitionInstance::new(vec![1, 2]).unwrap();
    let reference = denumerant::oracle::quasipoly_fit(&inst);
    for n in 0..=50u64 {
        assert_eq!(qp.eval(n).unwrap(), reference.eval(n).unwrap(), "n={n}");
    }
}

#[test]
fn compute_csv_and_text_formats() {
    let out = run(&["compute", "--a", "1,2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "m,v,coeff");
    assert!(lines.contains(&"0,1,1/2"));
    assert!(lines.contains(&"1,2,1/2"));

    let out = run(&["compute", "--a", "1,2", "--format", "text"]);
    let text = stdout(&out);
    assert!(text.contains("a = [1, 2]  r = 2  D = 2"));
    assert!(text.contains("d[m=0][v=2] = 1"));
}

#[test]
fn experiment_json_format() {
    let out = run(&[
        "experiment",
        "--r",
        "1",
        "--d-min",
        "4",
        "--budget",
        "50",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["D"], 4);
    assert_eq!(rows[0]["alpha"], serde_json::json!([2, 3, 4, 6]));
}

#[test]
fn invalid_alpha_is_usage_error() {
    let out = run(&["compute", "--a", "1", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["compute", "--a", "1", "--alpha", "3,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["compute", "--a", "1", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_suites_pass() {
    for suite in ["lemmas", "staudt", "valuations", "props"] {
        let out = run(&["verify", "--suite", suite]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "suite {suite}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let text = stdout(&out);
        assert!(text.contains("PASS"));
        assert!(!text.contains("FAIL"));
    }
}

#[test]
fn verify_json_format() {
    let out = run(&[
        "verify", "--suite", "staudt", "--max", "40", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let checks: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert!(checks.as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn experiment_zero_budget_reports_not_found() {
    let out = run(&["experiment", "--r", "1", "--d-min", "4", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // header only, no rows
    assert_eq!(stdout(&out).trim(), "r,D,alpha,delta,valuations");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("NOT_FOUND"));
}

#[test]
fn experiment_finds_composite_rows() {
    let out = run(&[
        "experiment",
        "--r",
        "1",
        "--d-min",
        "4",
        "--d-max",
        "6",
        "--budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.trim().lines().collect();
    assert_eq!(rows[0], "r,D,alpha,delta,valuations");
    // D = 4 and D = 6 rows (5 is prime, skipped)
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("1,4,"));
    assert!(rows[2].starts_with("1,6,"));
}

#[test]
fn delta_command_kinds() {
    let out = run(&[
        "delta", "--r", "1", "--d", "1", "--alpha", "2", "--format", "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("delta = 1/12"));

    let out = run(&["delta", "--r", "2", "--d", "3", "--kind", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let values = doc["values"].as_object().unwrap();
    assert!(values.contains_key("delta"));
    assert!(values.contains_key("tilde_delta"));
    assert!(values.contains_key("delta_odd_block"));
    assert!(values.contains_key("delta_even_block"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("denumerant-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("qp.json");
    let out = run(&["compute", "--a", "1,2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    let doc: QuasiPolyDoc = serde_json::from_str(&body).expect("valid json");
    assert_eq!(doc.d, 2);
    std::fs::remove_dir_all(&dir).ok();
}
