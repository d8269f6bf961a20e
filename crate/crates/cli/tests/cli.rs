use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use obshap::random::{random_model, RandomModelConfig};
use obshap::scenarios;
use obshap_cli::{parse_model, render_model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn obshap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obshap"))
        .args(args)
        .output()
        .expect("run obshap")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn bundled_fixtures_are_the_scenarios() {
    let one = parse_model(&std::fs::read_to_string(fixture("scenario1.json")).unwrap()).unwrap();
    let two = parse_model(&std::fs::read_to_string(fixture("scenario2.json")).unwrap()).unwrap();
    assert_eq!(one, scenarios::scenario_one());
    assert_eq!(two, scenarios::scenario_two());
    assert_eq!(one.state_matrix().to_rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let rows: Vec<_> = two.sensors().iter().map(|s| s.row.clone()).collect();
    assert_eq!(
        rows,
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]
    );
    assert_eq!(two.horizon_samples(), 10);
}

#[test]
fn emit_scenarios_matches_bundled_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = obshap(&["emit-scenarios", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for name in ["scenario1.json", "scenario2.json"] {
        let emitted = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert_eq!(emitted, std::fs::read_to_string(fixture(name)).unwrap());
        assert!(parse_model(&emitted).unwrap().validate().is_ok());
    }
}

#[test]
fn model_files_round_trip_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let m: obshap::Model64 = random_model(&mut rng, &RandomModelConfig::default());
        assert_eq!(parse_model(&render_model(None, &m)).unwrap(), m);
    }
}

#[test]
fn analyze_file_equals_analyze_scenario() {
    let from_file = obshap(&[
        "analyze",
        "--model",
        fixture("scenario2.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let builtin = obshap(&["analyze", "--scenario", "2", "--format", "json"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, builtin.stdout);
}

#[test]
fn analyze_table_for_scenario_one() {
    let out = obshap(&["analyze", "--scenario", "1", "--metric", "min-eig"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Sensor  Value Function"));
    for name in ["C1", "C2"] {
        let line = text.lines().find(|l| l.starts_with(name)).unwrap();
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(&cols[1..], &["Min", "Eigenvalue", "0.0000", "10.0000", "50.00%"]);
    }
    assert!(text.contains("grand value v(N):     20.0000"));
}

#[test]
fn analyze_scenario_two_trace_json() {
    let out = obshap(&["analyze", "--scenario", "2", "--metric", "trace", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let phi: Vec<f64> = v["per_sensor"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["shapley"].as_f64().unwrap())
        .collect();
    assert_eq!(phi, vec![3187.0, 295.0, 5312.0, 10.0]);
    assert_eq!(v["metric"], "trace");
}

#[test]
fn horizon_override() {
    let out = obshap(&["analyze", "--scenario", "1", "--metric", "trace", "--horizon", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["horizon_samples"], 3);
    assert_eq!(v["per_sensor"][0]["shapley"], 6.0);
    assert_eq!(obshap(&["analyze", "--scenario", "1", "--horizon", "0"]).status.code(), Some(2));
}

#[test]
fn sampled_analysis_records_method() {
    let args = ["analyze", "--scenario", "2", "--sample", "2000", "--seed", "9", "--format", "json"];
    let a = obshap(&args);
    let b = obshap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["method"]["kind"], "sampled");
    assert_eq!(v["method"]["seed"], 9);
    assert!(v["axiom_report"].is_null());
}

#[test]
fn check_verdicts() {
    let out = obshap(&["check", "--scenario", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let verdict = |name: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .to_owned()
    };
    assert_eq!((verdict("full"), verdict("C1"), verdict("C2")), ("yes".into(), "no".into(), "no".into()));

    let text = String::from_utf8(obshap(&["check", "--scenario", "2"]).stdout).unwrap();
    let verdict = |name: &str| {
        text.lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .and_then(|l| l.split_whitespace().nth(1))
            .unwrap()
            .to_owned()
    };
    assert_eq!(verdict("full"), "yes");
    assert_eq!(verdict("C1"), "yes");
    assert_eq!(verdict("C2"), "no");
    assert_eq!(verdict("C4"), "no");
}

#[test]
fn check_one_state_model_and_unobservable_exit() {
    let dir = tempfile::tempdir().unwrap();
    let one = write_temp(
        &dir,
        "one.json",
        r#"{"state_matrix": [[1.0]], "sensors": [{"name": "y", "row": [1.0]}], "horizon_samples": 1}"#,
    );
    let out = obshap(&["check", "--model", &one]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("full       yes"));

    let blind = write_temp(
        &dir,
        "blind.json",
        r#"{"state_matrix": [[1.0, 0.0], [0.0, 1.0]], "sensors": [{"name": "y", "row": [1.0, 0.0]}], "horizon_samples": 5}"#,
    );
    assert_eq!(obshap(&["check", "--model", &blind]).status.code(), Some(1));
    // a huge threshold makes even the full scenario set fail
    assert_eq!(obshap(&["check", "--scenario", "1", "--tolerance", "100"]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("syntax.json", "{ not json", "syntax error"),
        (
            "schema.json",
            r#"{"state_matrix": [[1.0]], "sensors": [], "horizon_samples": 0}"#,
            "schema violation",
        ),
        (
            "unknown.json",
            r#"{"state_matrix": [[1.0]], "sensors": [], "horizon_samples": 1, "B": []}"#,
            "schema violation",
        ),
        (
            "invalid.json",
            r#"{"state_matrix": [[1.0, 0.0], [0.0, 1.0]], "sensors": [{"name": "a", "row": [1, 2, 3]}], "horizon_samples": 2}"#,
            "row length mismatch",
        ),
    ];
    for (name, text, needle) in cases {
        let path = write_temp(&dir, name, text);
        let out = obshap(&["analyze", "--model", &path]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty());
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(needle), "{name}: {err}");
    }
    let missing = dir.path().join("nope.json");
    assert_eq!(obshap(&["analyze", "--model", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(obshap(&["analyze"]).status.code(), Some(2));
    assert_eq!(obshap(&["analyze", "--scenario", "3"]).status.code(), Some(2));
    assert_eq!(obshap(&["analyze", "--scenario", "1", "--metric", "logdet"]).status.code(), Some(2));
    assert_eq!(obshap(&["analyze", "--scenario", "1", "--tolerance", "-1"]).status.code(), Some(2));
    assert_eq!(obshap(&["analyze", "--scenario", "1", "--sample", "0"]).status.code(), Some(2));
}

#[test]
fn too_many_sensors_exit_three_unless_sampling() {
    let sensors: Vec<String> = (0..25)
        .map(|i| format!(r#"{{"name": "s{i}", "row": [{}.0, 1.0]}}"#, i % 4))
        .collect();
    let text = format!(
        r#"{{"state_matrix": [[0.9, 0.1], [0.0, 0.8]], "sensors": [{}], "horizon_samples": 4}}"#,
        sensors.join(", ")
    );
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "wide.json", &text);
    let out = obshap(&["analyze", "--model", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("sampling"));
    let out = obshap(&["analyze", "--model", &path, "--sample", "200", "--metric", "trace"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn help_goes_to_stdout() {
    let out = obshap(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("analyze"));
}
