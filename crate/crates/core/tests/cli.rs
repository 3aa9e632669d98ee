use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn geninv(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geninv"))
        .args(args)
        .current_dir(cwd)
        .env_remove("GENINV_SEED")
        .output()
        .unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fixture(&dir, "diag20", "2 2 real\n2 0\n0 0\n");
    fixture(&dir, "zero", "2 2 real\n0 0\n0 0\n");
    fixture(&dir, "identity", "2 2 real\n1 0\n0 1\n");
    fixture(&dir, "p1", "2 2 real\n1 0\n0 0\n");
    fixture(&dir, "e1", "2 1 real\n1\n0\n");
    fixture(&dir, "short", "2 2 real\n1 0\n0\n");
    dir
}

#[test]
fn pinv_of_singular_diagonal() {
    let dir = workspace();
    let out = geninv(&["pinv", "diag20"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["command"], "pinv");
    assert_eq!(report["inverse"], json!([[0.5, 0.0], [0.0, 0.0]]));
    let residuals = report["residuals"].as_object().unwrap();
    assert_eq!(residuals.len(), 4);
    for r in residuals.values() {
        assert!(r["value"].as_f64().unwrap() <= 1e-12);
    }
}

#[test]
fn bcinv_with_zero_generators_is_zero() {
    let dir = workspace();
    let out = geninv(&["bcinv", "diag20", "zero", "zero"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["inverse"], json!([[0.0, 0.0], [0.0, 0.0]]));
}

#[test]
fn outer_without_complement_exits_two() {
    let dir = workspace();
    let out = geninv(&["outer", "diag20", "e1", "e1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = json_of(&out);
    assert_eq!(err["clause"], "R(A·T) ⊕ S ≠ Y");
    assert!(err["margin"].is_number());
    assert!(err["error"].is_string());
}

#[test]
fn malformed_file_exits_one_with_position() {
    let dir = workspace();
    let out = geninv(&["pinv", "short"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = json_of(&out);
    let message = err["error"].as_str().unwrap();
    assert!(message.contains("expected 4 entries, found 3"), "{message}");
    assert!(message.contains("line 3"), "{message}");
}

#[test]
fn missing_file_and_bad_flags_exit_one() {
    let dir = workspace();
    assert_eq!(
        geninv(&["pinv", "absent"], dir.path()).status.code(),
        Some(1)
    );
    assert_eq!(geninv(&["pinv"], dir.path()).status.code(), Some(1));
    let out = geninv(&["--steps", "1e-3,1e-2", "pinv", "diag20"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = workspace();
    let out = geninv(&["--out", "report.json", "pinv", "identity"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
    let report: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["inverse"], json!([[1.0, 0.0], [0.0, 1.0]]));
}

#[test]
fn seeded_commands_are_deterministic() {
    let dir = workspace();
    for args in [
        &["--seed", "5", "derivcheck", "--kind", "mp"][..],
        &[
            "--seed", "5", "seqcheck", "--family", "rotating", "diag20", "p1", "p1",
        ][..],
    ] {
        let first = geninv(args, dir.path());
        let second = geninv(args, dir.path());
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout);
    }
    let env = Command::new(env!("CARGO_BIN_EXE_geninv"))
        .args(["derivcheck", "--kind", "mp"])
        .current_dir(dir.path())
        .env("GENINV_SEED", "5")
        .output()
        .unwrap();
    let flag = geninv(&["--seed", "5", "derivcheck", "--kind", "mp"], dir.path());
    assert_eq!(env.stdout, flag.stdout);
}

#[test]
fn rank_drop_sequence_diverges() {
    let dir = workspace();
    let out = geninv(
        &["seqcheck", "--family", "rank-drop", "diag20", "p1", "p1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json_of(&out);
    assert_eq!(report["family"], "rank-drop");
    assert_eq!(report["all_false"], true);
}

#[test]
fn gap_reports_sine_of_angle() {
    let dir = workspace();
    let theta = 0.3f64;
    fixture(
        &dir,
        "line",
        &format!("2 1 real\n{:.17e}\n{:.17e}\n", theta.cos(), theta.sin()),
    );
    let out = geninv(&["gap", "e1", "line"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let gap = json_of(&out)["gap"].as_f64().unwrap();
    assert!((gap - theta.sin()).abs() < 1e-12);
}
