use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn knodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knodel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = knodel(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn golden(name: &str, args: &[&str]) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name]
        .iter()
        .collect();
    let expected =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(stdout(args), expected, "golden file {name}");
}

/// `value` column of a CSV rendering.
fn csv_values(text: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "value").unwrap();
    lines
        .map(|l| l.split(',').nth(col).unwrap().to_string())
        .collect()
}

#[test]
fn double_step_top_zero_table() {
    golden(
        "prob_double_top0.txt",
        &[
            "prob", "--alpha", "1/2", "--double", "--steps", "2", "--state", "top:0",
        ],
    );
}

#[test]
fn extra_state_p_json() {
    golden(
        "prob_p_third.json",
        &[
            "prob", "--alpha", "1/3", "--steps", "1", "--state", "P", "--format", "json",
        ],
    );
}

#[test]
fn bottom_layer_csv_with_floats() {
    golden(
        "prob_bottom1_csv.csv",
        &[
            "prob", "--alpha", "2/5", "--steps", "6", "--state", "bottom:1", "--format", "csv",
            "--float",
        ],
    );
}

#[test]
fn expected_end_tables() {
    golden(
        "expected_end_half.txt",
        &["expected-end", "--alpha", "1/2", "--steps", "2"],
    );
    golden(
        "expected_end_third.json",
        &[
            "expected-end",
            "--alpha",
            "1/3",
            "--steps",
            "4",
            "--format",
            "json",
        ],
    );
}

#[test]
fn expected_end_zero_steps_is_one_row() {
    let out = stdout(&[
        "expected-end",
        "--alpha",
        "1/2",
        "--steps",
        "0",
        "--format",
        "csv",
    ]);
    assert_eq!(out, "alpha,step,value\n1/2,0,0\n");
}

#[test]
fn every_method_gives_the_same_values() {
    for (double, state) in [
        (true, "top:0"),
        (true, "bottom:3"),
        (true, "Q"),
        (false, "top:3"),
        (false, "bottom:0"),
        (false, "P"),
    ] {
        let mut base = vec![
            "prob", "--alpha", "2/7", "--steps", "9", "--state", state, "--format", "csv",
        ];
        if double {
            base.push("--double");
        }
        let reference = csv_values(&stdout(&base));
        for method in ["kernel2", "kernel3", "closed"] {
            let mut args = base.clone();
            args.extend(["--method", method, "--verify"]);
            assert_eq!(csv_values(&stdout(&args)), reference, "{method} {state}");
        }
    }
}

#[test]
fn closed_method_reproduces_double_step_example() {
    let out = stdout(&[
        "prob", "--alpha", "1/2", "--double", "--steps", "2", "--state", "top:0", "--method",
        "closed", "--format", "csv",
    ]);
    assert_eq!(csv_values(&out), ["1", "1/2", "5/16"]);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = [
        "prob", "--alpha", "3/7", "--steps", "8", "--state", "top:2", "--float",
    ];
    let csv = stdout(&[&args[..], &["--format", "csv"]].concat());
    let json: Value =
        serde_json::from_str(&stdout(&[&args[..], &["--format", "json"]].concat())).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for (line, row) in lines.zip(rows) {
        for (key, field) in header.iter().zip(line.split(',')) {
            let cell = match &row[*key] {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(cell, field, "{key}");
        }
    }
    assert_eq!(json["meta"]["alpha"], "3/7");
    assert_eq!(json["meta"]["order"], 8);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "prob", "--alpha", "1/3", "--steps", "12", "--state", "bottom:2", "--format", "json",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn asymptotic_columns() {
    let out = stdout(&[
        "expected-end",
        "--alpha",
        "1/2",
        "--steps",
        "4096",
        "--stride",
        "4096",
        "--asymptotic",
        "--format",
        "json",
    ]);
    let json: Value = serde_json::from_str(&out).unwrap();
    let last = json["rows"].as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["step"], 4096);
    assert!(last["value"].is_null());
    let ratio: f64 = last["ratio"].as_str().unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn invalid_flags_exit_two() {
    let cases: [&[&str]; 6] = [
        &["prob", "--alpha", "3/2", "--steps", "2", "--state", "P"],
        &["prob", "--alpha", "0", "--steps", "2", "--state", "P"],
        &[
            "prob", "--alpha", "1/2", "--steps", "2", "--state", "middle:3",
        ],
        &[
            "prob", "--alpha", "1/2", "--steps", "2", "--state", "top:1", "--double",
        ],
        &[
            "prob", "--alpha", "1/2", "--steps", "2", "--state", "P", "--method", "magic",
        ],
        &["expected-end", "--alpha", "1/2", "--steps", "100000"],
    ];
    for args in cases {
        assert_eq!(knodel(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_reports_printed_forms() {
    let out = knodel(&[
        "verify",
        "--alpha-list",
        "1/2,2/7",
        "--order",
        "10",
        "--max-index",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("printed radical forms: f0 MATCH"));
    assert!(text.ends_with("0 failed\n"));
}

#[test]
fn injected_fault_exits_three() {
    let out = knodel(&[
        "verify",
        "--alpha-list",
        "1/3",
        "--order",
        "6",
        "--max-index",
        "2",
        "--inject-fault",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("differs at z^3"), "{err}");
}
