use std::path::Path;
use std::process::{Command, Output};

use diffuse_born::green::f_shape;
use diffuse_born::linalg::solve_linear;
use diffuse_born::scenario::{exit_code, RunSummary, VERSION};
use diffuse_born::DenseMatrixR;
use serde_json::Value;

use crate::support::{fixture, heavy};

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffuse-born"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_config(config: &Path, out: &Path) -> Output {
    tool(&[
        "run",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--threads",
        "1",
    ])
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn version_prints_crate_version() {
    let out = tool(&["version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(VERSION));
}

#[test]
fn bound_reports_ball_threshold() {
    let out = tool(&["bound", "--a", "0.3"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let threshold = v["verdict"]["threshold"].as_f64().unwrap();
    let expected = 1.0 / f_shape(2.0 * std::f64::consts::PI * 0.3).unwrap();
    assert!((threshold / expected - 1.0).abs() < 1e-14);
}

#[test]
fn bound_rejects_nonpositive_radius() {
    assert_eq!(tool(&["bound", "--a=-1"]).status.code(), Some(3));
    assert_eq!(tool(&["bound", "--a", "0"]).status.code(), Some(3));
}

#[test]
fn bound_fixture_runs_through_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(&fixture("bound_a03.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let summary: RunSummary = serde_json::from_slice(&out.stdout).unwrap();
    let threshold = summary.details["verdict"]["threshold"].as_f64().unwrap();
    assert!((threshold * f_shape(2.0 * std::f64::consts::PI * 0.3).unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(summary.details["verdict"]["satisfied"], Value::Bool(true));
}

#[test]
fn cube_spectrum_csv_is_complete_and_reproducible() {
    let _guard = heavy();
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let config = fixture("cube_kappa1.json");
    for dir in [&first, &second] {
        let out = run_config(&config, dir.path());
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let csv_a = std::fs::read(first.path().join("cube_kappa1.csv")).unwrap();
    let csv_b = std::fs::read(second.path().join("cube_kappa1.csv")).unwrap();
    assert_eq!(csv_a, csv_b);

    let text = String::from_utf8(csv_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,re,im,n_over_N"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 1000);
    assert!(rows.windows(2).all(|r| r[0][1] >= r[1][1]));
    assert_eq!(rows[0][0], 1.0);
    assert_eq!(rows[999][3], 1.0);

    let read = |dir: &Path| -> RunSummary {
        serde_json::from_slice(&std::fs::read(dir.join("cube_kappa1.summary.json")).unwrap())
            .unwrap()
    };
    let (a, b) = (read(first.path()), read(second.path()));
    assert_eq!(a.config_hash, b.config_hash);
    assert_eq!(a.w_max, b.w_max);
    assert_eq!(a.n, Some(1000));
}

#[test]
fn summary_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(&fixture("forward_cube.json"), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("forward_cube.summary.json")).unwrap();
    let once: RunSummary = serde_json::from_str(&text).unwrap();
    let reserialized = serde_json::to_string_pretty(&once).unwrap();
    let twice: RunSummary = serde_json::from_str(&reserialized).unwrap();
    assert_eq!(once, twice);
    assert_eq!(reserialized, serde_json::to_string_pretty(&twice).unwrap());
    assert_eq!(text, reserialized);

    let data = std::fs::read_to_string(dir.path().join("forward_cube.data.csv")).unwrap();
    assert_eq!(data.lines().count(), 1 + 3 * 2);
}

#[test]
fn config_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = write_config(
        dir.path(),
        "missing.json",
        r#"{ "scenario": "cube_spectrum", "H_over_lambda": 0.5, "kappa": 1 }"#,
    );
    let out = run_config(&missing, dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("h_over_lambda"));

    let negative = write_config(
        dir.path(),
        "negative.json",
        r#"{ "scenario": "cube_spectrum", "H_over_lambda": -0.5, "h_over_lambda": 0.05, "kappa": 1 }"#,
    );
    let out = run_config(&negative, dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("length must be positive"));

    let unknown = write_config(dir.path(), "unknown.json", r#"{ "scenario": "teleport" }"#);
    assert_eq!(run_config(&unknown, dir.path()).status.code(), Some(3));

    let garbage = write_config(dir.path(), "garbage.json", "not json");
    assert_eq!(run_config(&garbage, dir.path()).status.code(), Some(3));
}

#[test]
fn solver_errors_exit_two_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let capped = write_config(
        dir.path(),
        "capped.json",
        r#"{ "scenario": "cube_spectrum", "H_over_lambda": 0.5, "h_over_lambda": 0.05, "kappa": 1, "real_cap": 10 }"#,
    );
    let out = run_config(&capped, dir.path());
    assert_eq!(out.status.code(), Some(2));
    let report: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("capped.error.json")).unwrap())
            .unwrap();
    assert!(report.to_string().contains("1000"));

    let probe_on_voxel = write_config(
        dir.path(),
        "probe.json",
        r#"{ "scenario": "forward_data", "H_over_lambda": 0.25, "h_over_lambda": 0.05, "kappa": 1,
             "probes": { "sources": [[0.0, 0.0, 0.0]], "detectors": [[1.0, 0.0, 0.0]] } }"#,
    );
    let out = run_config(&probe_on_voxel, dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("probe.error.json").exists());
}

#[test]
fn singular_system_maps_to_solver_exit_code() {
    let singular = DenseMatrixR::from_fn(3, 3, |i, j| (i + j) as f64);
    let outcome = solve_linear(&singular, &DenseMatrixR::identity(3));
    assert!(matches!(outcome, Err(diffuse_born::Error::Singular { .. })));
    assert_eq!(exit_code(&outcome), 2);
}
