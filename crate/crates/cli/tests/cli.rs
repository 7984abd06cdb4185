//! End-to-end tests for the `ndcantor` binary: the documented input/output
//! examples, the CSV/JSON envelopes, and the exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndcantor"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn map_inverse_recovers_published_values() {
    let out = run(&["map", "--bijection", "ternary-line:minus", "--inverse", "1/2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["input", "result", "decimal", "status"]);
    assert_eq!(rows[1][0], "1/2");
    assert_eq!(rows[1][1], "1/3");
    assert_eq!(rows[1][3], "ok");

    let out = run(&["map", "--bijection", "quaternary:plus", "--inverse", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[1][1], "2");

    let out = run(&["map", "--bijection", "quaternary:minus", "--inverse", "1"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[1][1], "2/3");
}

#[test]
fn map_forward_is_the_left_inverse() {
    let out = run(&["map", "--bijection", "ternary-line:minus", "--forward", "1/3"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[1][1], "1/2");

    let out = run(&["map", "--bijection", "identity", "--forward", "7"]);
    let rows = csv_rows(&out);
    assert_eq!(rows[1][1], "7");
}

#[test]
fn map_outside_the_set_exits_with_code_two() {
    // 1/3 = 0.(1) in base 4 uses the forbidden digit 1, so it lies outside
    // the quaternary set and the forward map must refuse it.
    let out = run(&["map", "--bijection", "quaternary:plus", "--forward", "1/3"]);
    assert_eq!(out.status.code(), Some(2));
    let rows = csv_rows(&out);
    assert_eq!(rows[1][1], "");
    assert!(rows[1][3].contains("not an element"), "{:?}", rows[1]);
}

#[test]
fn map_mixes_good_and_bad_rows_but_still_fails() {
    let out = run(&[
        "map",
        "--bijection",
        "quaternary:plus",
        "--forward",
        "1/2",
        "1/3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let rows = csv_rows(&out);
    assert_eq!(rows[1][1], "1/2"); // 1/2 = 0.2 in base 4 is a member
    assert_eq!(rows[2][1], "");
}

#[test]
fn unparseable_input_exits_with_code_one() {
    let out = run(&["map", "--bijection", "nonsense", "--forward", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown bijection"));

    let out = run(&["map", "--forward", "one/half"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spectrum_matches_the_doubled_digit_sequence() {
    let out = run(&["spectrum", "--bijection", "quaternary:plus", "--terms", "7"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["n", "n_prime", "decimal"]);
    let primes: Vec<&str> = rows[1..].iter().map(|r| r[1].as_str()).collect();
    assert_eq!(primes, ["2", "8", "10", "32", "34", "40", "42"]);
}

#[test]
fn spectrum_of_the_line_is_the_identity() {
    let out = run(&["spectrum", "--bijection", "ternary-line:minus", "--terms", "4"]);
    let rows = csv_rows(&out);
    for (i, row) in rows[1..].iter().enumerate() {
        assert_eq!(row[0], (i + 1).to_string());
        assert_eq!(row[1], (i + 1).to_string());
    }
}

#[test]
fn analyze_then_reconstruct_round_trips_through_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let coeffs = dir.path().join("coeffs.json");
    let out = run(&[
        "analyze",
        "--terms",
        "8",
        "--output",
        coeffs.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let text = std::fs::read_to_string(&coeffs).expect("coefficient file");
    let json: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["cos"].as_array().unwrap().len(), 9);
    assert_eq!(json["sin"].as_array().unwrap().len(), 8);

    let out = run(&[
        "reconstruct",
        "--coefficients",
        coeffs.to_str().unwrap(),
        "--terms",
        "8",
        "--samples",
        "11",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["x", "y", "coordinate_system"]);
    assert_eq!(rows.len(), 1 + 2 * 11);
    // The partial sum at x = 1/10 must sit near the sawtooth value 1/10.
    let row = rows[1..]
        .iter()
        .find(|r| r[2] == "lower" && r[0].starts_with("0.1"))
        .expect("a lower row near 0.1");
    let y: f64 = row[1].parse().unwrap();
    assert!((y - 0.1).abs() < 0.05, "partial sum off: {y}");
}

#[test]
fn reconstruct_refuses_more_terms_than_the_file_holds(
) {
    let dir = tempfile::tempdir().expect("tempdir");
    let coeffs = dir.path().join("coeffs.json");
    let out = run(&["analyze", "--terms", "3", "--output", coeffs.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&[
        "reconstruct",
        "--coefficients",
        coeffs.to_str().unwrap(),
        "--terms",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_or_corrupt_coefficient_file_exits_with_code_three() {
    let out = run(&["reconstruct", "--coefficients", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = tempfile::tempdir().expect("tempdir");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema_version\": 99}").unwrap();
    let out = run(&["reconstruct", "--coefficients", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    std::fs::write(&bad, "not json at all").unwrap();
    let out = run(&["reconstruct", "--coefficients", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn figures_emit_the_documented_columns() {
    for which in ["fig1-upper", "fig1-lower", "fig2-upper", "fig2-lower"] {
        let out = run(&["figures", "--which", which, "--samples", "5"]);
        assert!(out.status.success(), "{which}: {}", stderr(&out));
        let rows = csv_rows(&out);
        assert_eq!(rows[0], ["x", "y", "coordinate_system"]);
        assert_eq!(rows.len(), 6, "{which}");
    }
    let out = run(&["figures", "--which", "fig3", "--samples", "5", "--terms", "6"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(csv_rows(&out).len(), 1 + 2 * 5);
}

#[test]
fn json_format_wraps_rows_in_an_envelope() {
    let out = run(&["--format", "json", "spectrum", "--bijection", "quaternary:plus", "--terms", "3"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["command"], "spectrum");
    assert_eq!(json["bijection"], "quaternary:plus");
    assert_eq!(json["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn csv_output_uses_line_feeds_only() {
    let out = run(&["spectrum", "--terms", "2"]);
    let raw = String::from_utf8(out.stdout).unwrap();
    assert!(!raw.contains('\r'));
    assert!(raw.ends_with('\n'));
}

#[test]
fn output_flag_writes_the_table_to_disk() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("spec.csv");
    let out = run(&["spectrum", "--terms", "2", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    assert!(Path::new(&path).exists());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n,n_prime,decimal\n"));
}

#[test]
fn selftest_passes_at_default_precision() {
    let out = run(&["selftest"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = csv_rows(&out);
    assert!(rows.len() >= 5);
    for row in &rows[1..] {
        assert_eq!(row[1], "pass", "{row:?}");
    }
}

#[test]
fn selftest_reports_degradation_at_starved_precision() {
    let out = run(&["selftest", "--precision-bits", "16"]);
    assert_eq!(out.status.code(), Some(1));
    let body = stdout(&out);
    assert!(body.contains("FAIL"), "{body}");
}

#[test]
fn help_and_version_exit_cleanly() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ndcantor"));
    let out = run(&["--version"]);
    assert!(out.status.success());
}
