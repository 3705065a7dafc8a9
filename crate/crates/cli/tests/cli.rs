use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twist-lo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn riley_json_lists_exact_coefficients() {
    let out = run(&["riley", "--n", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["command"], "riley");
    assert!(v["version"].is_string());
    let terms = v["result"]["polynomial"].as_array().unwrap();
    assert_eq!(terms.len(), 11);
    let coeff = |s: u64, t: u64| {
        terms
            .iter()
            .find(|x| x["s_deg"] == s && x["T_deg"] == t)
            .map(|x| x["coeff"].as_str().unwrap().to_string())
    };
    assert_eq!(coeff(3, 1).as_deref(), Some("-2"));
    assert_eq!(coeff(2, 0).as_deref(), Some("11"));
    assert_eq!(coeff(0, 2), None);
}

#[test]
fn certify_emits_certificate() {
    let out = run(&["certify", "--n", "2", "--r", "1/1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = &stdout_json(&out)["result"];
    assert_eq!(
        (cert["n"].as_i64(), cert["p"].as_i64(), cert["q"].as_i64()),
        (Some(2), Some(1), Some(1))
    );
    assert!(cert["final_omega"].as_f64().unwrap().abs() < 1e-6);
    assert!(cert["final_gamma_abs"].as_f64().unwrap() < 1e-6);
    assert!(cert["tolerances"]["cert"].is_number());
}

#[test]
fn invalid_twist_exits_one_with_structured_error() {
    let out = run(&["solve", "--n", "0", "--s", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "InvalidTwist");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .starts_with("n must not be 0 or −1"));
}

#[test]
fn negative_twists_parse() {
    for args in [
        vec!["solve", "--n", "-3", "--s", "0.5"],
        vec!["solve", "--n=-3", "--s", "0.5"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["result"]["n"], -3);
    }
}

#[test]
fn parse_errors_exit_one() {
    for args in [
        vec!["certify", "--n", "2", "--r", "1/0"],
        vec!["certify", "--n", "2", "--r", "half"],
        vec!["solve", "--n", "2"],
        vec!["solve", "--n", "2", "--s", "1", "--bogus"],
        vec!["scan", "--n", "2", "--tol-T", "-1"],
        vec!["slope", "--n", "2", "--s", "1", "--r", "1/2"],
        vec![],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_json(&out)["error"]["kind"], "Usage", "{args:?}");
    }
}

#[test]
fn domain_errors_exit_one() {
    for (args, kind) in [
        (vec!["certify", "--n", "2", "--r", "9/2"], "SlopeOutOfRange"),
        (vec!["certify", "--n", "2", "--r", "2/2"], "MalformedSlope"),
        (vec!["solve", "--n", "2", "--s", "-1"], "Domain"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_json(&out)["error"]["kind"], kind);
    }
}

#[test]
fn numerical_failures_exit_two() {
    let out = run(&["certify", "--n", "3", "--r", "7/2", "--tol-cert", "1e-20"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "CertificateFailed");
    assert!(err["error"]["details"]["final_gamma_abs"].is_number());
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = run(&[flag]);
        assert_eq!(out.status.code(), Some(0));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["scan", "--n", "-2", "--samples", "50", "--format", "csv"],
        vec!["certify", "--n", "-3", "--r", "7/2"],
        vec!["slope", "--n", "1", "--r", "3", "--format", "text"],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let seq = run(&["scan", "--n", "4", "--samples", "64", "--sequential"]);
    let par = run(&["scan", "--n", "4", "--samples", "64"]);
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn scan_csv_round_trips_floats() {
    let out = run(&[
        "scan",
        "--n",
        "1",
        "--s-min",
        "0.01",
        "--s-max",
        "100",
        "--samples",
        "5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,T,t,B,g"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], 0.01);
    assert_eq!(rows[4][0], 100.0);
    // n = 1: T = s + 2 + 1/(s+1)
    for r in &rows {
        assert!((r[1] - (r[0] + 2.0 + 1.0 / (r[0] + 1.0))).abs() < 1e-12);
    }
}

#[test]
fn slope_at_s_and_by_inversion_agree() {
    let inv = stdout_json(&run(&["slope", "--n", "-2", "--r", "7/2"]));
    let sample = &inv["result"]["inversion"]["sample"];
    assert!((sample["g"].as_f64().unwrap() - 3.5).abs() <= 1e-9);
    let s = sample["s"].as_f64().unwrap().to_string();
    let direct = stdout_json(&run(&["slope", "--n", "-2", "--s", &s]));
    assert_eq!(direct["result"]["sample"], *sample);
}

#[test]
fn all_roots_lists_both_quadratic_roots() {
    let v = stdout_json(&run(&["solve", "--n", "2", "--s", "1", "--all-roots"]));
    let roots = v["result"]["all_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0].as_f64().unwrap() - (17.0 - 17f64.sqrt()) / 4.0).abs() < 1e-10);
}

#[test]
fn verify_passes_on_standard_grid() {
    let out = run(&["verify", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("check,cases,failures,worst,threshold,passed\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}
