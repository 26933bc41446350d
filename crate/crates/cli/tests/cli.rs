use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const SUITE: &str = r#"{"cases": [
    {"label": "square", "f": {"family": "poly", "params": [0, 0, 1]},
     "phi": {"family": "identity"}, "h": {"family": "h_linear"}, "c": 0, "q": 2,
     "interval": [0, 1], "checks": ["lemma1", "thm1", "thm2"]}
], "sweep": {"param": "q", "values": [1.5, 2, 3]}}"#;

fn hadamard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hadamard")).args(args).output().unwrap()
}

fn write_suite(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("suite.json");
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn verify_writes_json_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_suite(dir.path(), SUITE);
    let out = dir.path().join("report.json");
    let run = hadamard(&["verify", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--samples", "256"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"seed\": 42"));
    assert!(text.contains("\"samples\": 256"));
}

#[test]
fn report_converts_json_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_suite(dir.path(), SUITE);
    let json = dir.path().join("r.json");
    hadamard(&["verify", cfg.to_str().unwrap(), "--out", json.to_str().unwrap(), "--samples", "128"]);
    let direct = hadamard(&["verify", cfg.to_str().unwrap(), "--format", "csv", "--samples", "128"]);
    let converted = hadamard(&["report", json.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(converted.status.code(), Some(0));
    assert_eq!(direct.stdout, converted.stdout);
    let text = String::from_utf8(converted.stdout).unwrap();
    assert!(text.starts_with("label,check,lhs,bound,margin,holds,preconditions_ok,discrepancy,seed\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn sweep_expands_every_case() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_suite(dir.path(), SUITE);
    let run = hadamard(&["sweep", cfg.to_str().unwrap(), "--format", "csv", "--samples", "128", "--seed", "9"]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 3);
    assert!(text.contains("square[q=1.5],thm2,"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",9")));
}

#[test]
fn certify_reports_derivative_powers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_suite(dir.path(), SUITE);
    let run = hadamard(&["certify", cfg.to_str().unwrap(), "--format", "csv", "--samples", "128"]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.contains("square,certify.|poly("), "{text}");
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_suite(dir.path(), &SUITE.replace("h_linear", "h_cubic"));
    let run = hadamard(&["verify", bad.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("h_cubic"));

    let run = hadamard(&["verify", "/nonexistent/suite.json"]);
    assert_eq!(run.status.code(), Some(2));

    let cfg = write_suite(dir.path(), SUITE);
    let run = hadamard(&["verify", cfg.to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn unreachable_tolerance_fails_checks_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_suite(dir.path(), SUITE);
    let run = hadamard(&["verify", cfg.to_str().unwrap(), "--tol", "1e-300", "--samples", "64", "--format", "csv"]);
    assert_eq!(run.status.code(), Some(1));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains(",false,true,")), "{text}");
}
