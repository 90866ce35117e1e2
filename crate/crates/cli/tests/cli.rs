use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn loglog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loglog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_line(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
    serde_json::from_str(text.trim_end()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn case_a_bound_report() {
    let (m, c) = (data("exp_inv.json"), data("wild.json"));
    let out = loglog(&[
        "bound",
        "--case",
        "A",
        "--majorant",
        path(&m),
        "--cert",
        path(&c),
        "--dist",
        "0.5",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["bound"]["tower_height"], 2);
    assert_eq!(v["bound"]["top_exponent"], 16);
    assert_eq!(v["start_index"], 8);
    assert_eq!(v["trace"].as_array().unwrap().len(), 64);
}

#[test]
fn constant_majorant_analysis() {
    let m = data("const1.json");
    let v = json_stdout(&loglog(&["analyze-majorant", "--majorant", path(&m)]));
    assert_eq!(v["loglog_integral"], 0.0);
    assert_eq!(v["verdict"], "finite");
    assert_eq!(v["consistent"], true);
}

#[test]
fn divergent_majorant_analysis() {
    let m = data("double_exp_inv.json");
    let v = json_stdout(&loglog(&["analyze-majorant", "--majorant", path(&m)]));
    assert_eq!(v["loglog_integral"], "inf");
    assert_eq!(v["verdict"], "divergent");
}

#[test]
fn certificate_conversion() {
    let c = data("c124.json");
    let v = json_stdout(&loglog(&[
        "convert-cert",
        "--cert",
        path(&c),
        "--target",
        "4,8",
    ]));
    assert_eq!(v["certificate"]["alpha"], 0.015625);
    assert_eq!(
        v["certificate"]["ratios"],
        serde_json::json!([1.0, 4.0, 8.0])
    );
    assert_eq!(v["steps"], 6);
}

#[test]
fn trace_csv_header_and_rows() {
    let (m, c) = (data("exp_inv.json"), data("wild.json"));
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("trace.csv");
    let out = loglog(&[
        "trace",
        "--case",
        "A",
        "--majorant",
        path(&m),
        "--cert",
        path(&c),
        "--dist",
        "0.5",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("k,r_k,loglog_value,displacement_bound,cumulative_budget")
    );
    assert!(lines.next().unwrap().starts_with("8,"));
    assert_eq!(text.lines().count(), 65);
}

#[test]
fn divergence_exits_one_in_both_cases() {
    let m = data("double_exp_inv.json");
    for (case, cert) in [("A", "wild.json"), ("B", "c124.json")] {
        let c = data(cert);
        let out = loglog(&[
            "bound",
            "--case",
            case,
            "--majorant",
            path(&m),
            "--cert",
            path(&c),
            "--dist",
            "0.5",
        ]);
        assert_eq!(out.status.code(), Some(1));
        assert!(out.stdout.is_empty());
        assert_eq!(error_line(&out)["error"], "divergent-majorant");
    }
}

#[test]
fn monotonicity_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let skew = dir.path().join("skew.json");
    std::fs::write(
        &skew,
        r#"{"kind": "table", "intervals": [[-1, 0, 5], [0, 1, 2]]}"#,
    )
    .unwrap();
    let c = data("c124.json");
    let out = loglog(&[
        "bound",
        "--case",
        "B",
        "--majorant",
        path(&skew),
        "--cert",
        path(&c),
        "--dist",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"], "monotonicity-failure");
}

#[test]
fn weak_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let weak = dir.path().join("weak.json");
    std::fs::write(
        &weak,
        r#"{"type": "wild-set", "c": 0.5, "dimension": 3, "C": 1, "alpha": 0.5}"#,
    )
    .unwrap();
    let m = data("exp_inv.json");
    let out = loglog(&[
        "bound",
        "--case",
        "A",
        "--majorant",
        path(&m),
        "--cert",
        path(&weak),
        "--dist",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"], "weak-certificate");
}

#[test]
fn usage_io_and_parse_errors_exit_two() {
    let m = data("exp_inv.json");
    let c124 = data("c124.json");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["bound"], "usage-error"),
        (vec!["frobnicate"], "usage-error"),
        (
            vec!["convert-cert", "--cert", path(&c124), "--target", "4"],
            "usage-error",
        ),
        (
            vec!["analyze-majorant", "--majorant", "/nonexistent/m.json"],
            "io-error",
        ),
        (
            vec!["analyze-majorant", "--majorant", path(&c124)],
            "parse-error",
        ),
        (
            vec![
                "bound",
                "--case",
                "B",
                "--majorant",
                path(&m),
                "--cert",
                path(&c124),
                "--dist",
                "2",
            ],
            "invalid-argument",
        ),
        (
            vec![
                "bound",
                "--case",
                "A",
                "--majorant",
                path(&m),
                "--cert",
                path(&c124),
                "--dist",
                "0.5",
            ],
            "usage-error",
        ),
    ];
    for (args, code) in cases {
        let out = loglog(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_line(&out)["error"], code, "{args:?}");
    }
}

#[test]
fn help_and_version_succeed() {
    for flag in ["--help", "--version"] {
        let out = loglog(&[flag]);
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn estimate_alpha_on_closed_form_monomials() {
    let dir = tempfile::tempdir().unwrap();
    let family = dir.path().join("family.json");
    std::fs::write(
        &family,
        r#"{"cells": 64, "boundary": "monomial", "degrees": [1, 2, 3, 4, 5], "solver": "closed-form"}"#,
    )
    .unwrap();
    let out = loglog(&["estimate-alpha", "--grid", path(&family), "--scale", "0.1"]);
    let v = json_stdout(&out);
    assert!((v["alpha_emp"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(v["C_emp"], 1.0);
    assert_eq!(v["skipped"], 0);
}

#[test]
fn validate_random_family() {
    let (m, c, g) = (
        data("exp_inv.json"),
        data("wild.json"),
        data("random_family.json"),
    );
    let out = loglog(&[
        "validate",
        "--case",
        "A",
        "--majorant",
        path(&m),
        "--cert",
        path(&c),
        "--dist",
        "0.5",
        "--grid",
        path(&g),
        "--seed",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("sample_id,normalized_sup,u_at_origin,loglog_margin,verdict")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().all(|r| r.ends_with(",pass")));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (m, c, g) = (
        data("exp_inv.json"),
        data("c124.json"),
        data("random_family.json"),
    );
    let wild = data("wild.json");
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "bound",
            "--case",
            "B",
            "--majorant",
            path(&m),
            "--cert",
            path(&c),
            "--dist",
            "0.5",
        ],
        vec![
            "trace",
            "--case",
            "B",
            "--majorant",
            path(&m),
            "--cert",
            path(&c),
            "--dist",
            "0.5",
        ],
        vec!["analyze-majorant", "--majorant", path(&m)],
        vec!["estimate-alpha", "--grid", path(&g), "--seed", "9"],
        vec![
            "validate",
            "--case",
            "A",
            "--majorant",
            path(&m),
            "--cert",
            path(&wild),
            "--dist",
            "0.5",
            "--grid",
            path(&g),
        ],
    ];
    for args in invocations {
        let first = loglog(&args);
        let second = loglog(&args);
        assert!(first.status.success(), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}
