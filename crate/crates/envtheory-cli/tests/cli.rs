//! End-to-end checks of the installed binary: exit codes, output files and
//! both table formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_envtheory"))
}

fn config_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn spectrum_matches_golden_on_stdout() {
    let out = run(&[
        "spectrum",
        "--config",
        config_path("harmonic_spectrum.cfg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/harmonic_spectrum.csv"),
    )
    .unwrap();
    assert_eq!(out.stdout, golden);
}

#[test]
fn scan_through_critical_coupling_exits_2() {
    let out = run(&[
        "scan",
        "--config",
        config_path("well_scan.cfg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no-bound-state"));
    // the sweep must also reach genuine binding
    assert!(text.lines().filter(|l| l.ends_with(",ok")).count() >= 2);
}

#[test]
fn invalid_config_exits_1_with_named_constraint() {
    let dir = std::env::temp_dir().join("envtheory-cli-test-invalid");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.cfg");
    let text = std::fs::read_to_string(config_path("coulomb_ground.cfg"))
        .unwrap()
        .replace("arity = 2", "arity = 5");
    std::fs::write(&path, text).unwrap();
    let out = run(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2 <= K <= N"), "stderr: {err}");
}

#[test]
fn task_kind_mismatch_is_an_error() {
    let out = run(&[
        "solve",
        "--config",
        config_path("harmonic_spectrum.cfg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("does not match subcommand"), "stderr: {err}");
}

#[test]
fn output_file_matches_stdout_and_jsonl_is_wellformed() {
    let dir = std::env::temp_dir().join("envtheory-cli-test-output");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("critical.jsonl");
    let config = config_path("exponential_critical.cfg");
    let streamed = run(&[
        "critical",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "jsonl",
    ]);
    assert_eq!(streamed.status.code(), Some(0));
    let filed = run(&[
        "critical",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "jsonl",
        "--output",
        file.to_str().unwrap(),
    ]);
    assert_eq!(filed.status.code(), Some(0));
    let file_bytes = std::fs::read(&file).unwrap();
    assert_eq!(streamed.stdout, file_bytes);
    let text = String::from_utf8(file_bytes).unwrap();
    for line in text.lines() {
        assert!(line.starts_with('{') && line.ends_with('}'));
        assert!(line.contains("\"g_c\":4.1563440556484"), "line: {line}");
        assert!(line.contains("\"status\":\"ok\""));
    }
}

#[test]
fn simplex_check_runs_on_taskless_config() {
    // without a [task] section the subcommand decides the task
    let dir = std::env::temp_dir().join("envtheory-cli-test-taskless");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("taskless.cfg");
    let text = std::fs::read_to_string(config_path("harmonic_spectrum.cfg")).unwrap();
    let without_task = text.split("[task]").next().unwrap();
    std::fs::write(&path, without_task).unwrap();

    let out = run(&["simplex-check", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,k,r0,edge,circumradius,cos_alpha,subset_radius,max_deviation,status"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("4,3,"), "row: {row}");
    assert!(row.ends_with(",ok"), "row: {row}");
    // worst coordinate-vs-formula deviation stays at rounding level
    let deviation: f64 = row.split(',').nth(7).unwrap().parse().unwrap();
    assert!(deviation < 1e-12);

    // the same taskless file serves any task subcommand
    let out = run(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn emitted_rows_are_recheckable() {
    // converged rows carry the stationarity residual; it stays tiny
    let out = run(&[
        "spectrum",
        "--config",
        config_path("harmonic_spectrum.cfg").to_str().unwrap(),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    for row in text.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[9], "ok");
        let residual: f64 = fields[8].parse().unwrap();
        assert!(residual.abs() < 1e-10, "row: {row}");
    }
}

#[test]
fn tolerance_and_scan_grid_flags_are_accepted() {
    let out = run(&[
        "solve",
        "--config",
        config_path("coulomb_ground.cfg").to_str().unwrap(),
        "--tolerance",
        "1e-10",
        "--scan-grid",
        "600",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-1.111111111111"), "stdout: {text}");
}
