use std::f64::consts::PI;
use std::process::{Command, Output};

use malmsten::{delta_closed, malmsten_c, vardi_b_constant, MalmstenParams};
use malmsten_cli::output::{OutputRecord, Results};
use proptest::prelude::*;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_malmsten"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn record(out: &Output) -> OutputRecord {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    OutputRecord::from_json(text.trim()).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn value(out: &Output) -> f64 {
    match record(out).results {
        Results::Value { value } => value.0,
        Results::Quadrature(q) => q.value.0,
        other => panic!("unexpected results {other:?}"),
    }
}

fn stdout_without_timing(out: &Output) -> String {
    let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("timing_ms");
    v.to_string()
}

#[test]
fn eval_constants() {
    let out = run(&["eval", "--which", "b"]);
    assert_eq!(code(&out), 0);
    assert_eq!(value(&out), vardi_b_constant());

    let out = run(&["eval", "--which", "a", "--a", "0.5"]);
    assert!((value(&out) - (2.0 / PI).ln()).abs() < 1e-13);

    let out = run(&["eval", "--which", "a", "--a", "-1"]);
    assert_eq!(value(&out), delta_closed(1.0).unwrap());

    let out = run(&["eval", "--which", "c", "--a", "2", "--b", "3"]);
    assert_eq!(
        value(&out),
        malmsten_c(MalmstenParams::new(2.0, 3.0).unwrap())
    );
}

#[test]
fn eval_usage_errors() {
    for args in [
        &["eval", "--which", "a"][..],
        &["eval", "--which", "c", "--a", "1"],
        &["eval", "--which", "c", "--a", "-1", "--b", "1"],
        &["eval", "--which", "b", "--a", "1"],
        &["eval", "--which", "d"],
        &["eval"],
        &["eval", "--which", "a", "--a", "inf"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn quad_matches_closed_forms() {
    let out = run(&["quad", "--which", "b"]);
    assert_eq!(code(&out), 0);
    assert!((value(&out) - vardi_b_constant()).abs() <= 1e-8);

    let out = run(&["quad", "--which", "a", "--a", "0"]);
    assert_eq!(code(&out), 0);
    assert!((value(&out) - delta_closed(0.0).unwrap()).abs() <= 1e-8);
}

#[test]
fn quad_exit_codes() {
    assert_eq!(code(&run(&["quad", "--which", "a", "--a", "NaN"])), 2);
    assert_eq!(
        code(&run(&["quad", "--which", "b", "--rel-tol", "1e-15"])),
        2
    );
    // sech(1e-250 x) is flat across the whole node range.
    let out = run(&[
        "quad",
        "--which",
        "c",
        "--a",
        "1",
        "--b",
        "1e-250",
        "--rel-tol",
        "1e-14",
    ]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
    match record(&out).results {
        Results::Quadrature(q) => assert!(!q.converged),
        other => panic!("{other:?}"),
    }
}

#[test]
fn verify_grid() {
    let out = run(&["verify", "--grid", "0.25,0.5,1,2,4", "--tol", "1e-8"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    match record(&out).results {
        Results::Chain(c) => {
            assert!(c.overall_pass);
            assert!(c.steps.len() >= 5 * 7);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn verify_exit_code_tracks_overall_pass() {
    let out = run(&["verify", "--grid", "1,-3", "--tol", "1e-14"]);
    let pass = match record(&out).results {
        Results::Chain(c) => c.overall_pass,
        other => panic!("{other:?}"),
    };
    assert_eq!(code(&out), if pass { 0 } else { 1 });
}

#[test]
fn verify_usage_errors() {
    for args in [
        &["verify", "--grid", ""][..],
        &["verify", "--grid", "1", "--tol", "1e-30"],
        &["verify", "--grid", "1", "--tol", "0"],
        &["verify", "--grid", "1,x"],
        &["verify"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn verify_csv() {
    let out = run(&["verify", "--grid", "0", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "name");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.iter().any(|r| &r[2] == "skipped"));
    assert!(rows.iter().all(|r| r.len() == headers.len()));
}

#[test]
fn table_rows() {
    let out = run(&[
        "table", "--a-min", "0", "--a-max", "2", "--steps", "5", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "a",
            "delta_closed",
            "delta_quadrature",
            "abs_err",
            "converged"
        ]
    );
    let rows: Vec<Vec<String>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let a: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(a, [0.0, 0.5, 1.0, 1.5, 2.0]);
    for r in &rows {
        let closed: f64 = r[1].parse().unwrap();
        let err: f64 = r[3].parse().unwrap();
        assert!(err <= 1e-8 * closed.abs().max(1.0));
        assert_eq!(r[4], "true");
    }

    assert_eq!(
        code(&run(&[
            "table", "--a-min", "2", "--a-max", "1", "--steps", "5"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "table", "--a-min", "0", "--a-max", "1", "--steps", "1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "table", "--a-min", "-inf", "--a-max", "1", "--steps", "3"
        ])),
        2
    );
}

#[test]
fn json_output_is_deterministic_and_round_trips() {
    let args = ["table", "--a-min", "-1", "--a-max", "1", "--steps", "3"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(
        stdout_without_timing(&first),
        stdout_without_timing(&second)
    );

    let text = String::from_utf8(first.stdout.clone()).unwrap();
    let parsed = OutputRecord::from_json(text.trim()).unwrap();
    assert_eq!(parsed.to_json().unwrap(), text.trim());
}

fn token() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("eval".to_string()),
        Just("quad".to_string()),
        Just("verify".to_string()),
        Just("table".to_string()),
        Just("--which".to_string()),
        Just("--a".to_string()),
        Just("--b".to_string()),
        Just("--grid".to_string()),
        Just("--tol".to_string()),
        Just("--rel-tol".to_string()),
        Just("--a-min".to_string()),
        Just("--a-max".to_string()),
        Just("--steps".to_string()),
        Just("--format".to_string()),
        Just("a".to_string()),
        Just("b".to_string()),
        Just("c".to_string()),
        Just("csv".to_string()),
        Just("NaN".to_string()),
        Just("-inf".to_string()),
        Just("1e-30".to_string()),
        Just("0".to_string()),
        Just("-1".to_string()),
        Just("3".to_string()),
        Just(",,".to_string()),
        Just("".to_string()),
        "[ -/:-~]{0,6}",
        (-5.0f64..5.0).prop_map(|v| v.to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn malformed_input_never_panics(args in prop::collection::vec(token(), 0..7)) {
        let out = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
        let status = out.status.code();
        prop_assert!(matches!(status, Some(0..=3)), "{:?} -> {:?}", args, status);
        if status != Some(0) {
            prop_assert!(!out.stderr.is_empty(), "{:?}: no diagnostic", args);
        }
        let stderr = String::from_utf8_lossy(&out.stderr);
        prop_assert!(!stderr.contains("panicked"), "{:?}: {}", args, stderr);
    }
}
