use std::path::{Path, PathBuf};
use std::process::Command;

use dg_workbench::dgalg::{fixtures, DgAlgebra};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn dgwb(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgwb")).args(args).env_remove("DGWB_THREADS").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn exit_codes() {
    assert_eq!(dgwb(&["validate", &path("koszul.json")]).0, 0);
    assert_eq!(dgwb(&["validate", &path("invalid/delta_squared.json")]).0, 1);
    assert_eq!(dgwb(&["cover", &path("atlas_single.json")]).0, 1);
    assert_eq!(dgwb(&["validate"]).0, 64);
    assert_eq!(dgwb(&["validate", "/nonexistent/a.json"]).0, 65);
}

#[test]
fn parse_errors_carry_a_position() {
    let (code, stdout, stderr) = dgwb(&["validate", &path("invalid/unknown_symbol.json")]);
    assert_eq!(code, 65);
    assert!(stdout.is_empty());
    assert!(stderr.contains("line"), "{stderr}");
}

#[test]
fn delta_squared_reports_a_witness() {
    let (code, stdout, _) = dgwb(&["validate", &path("invalid/delta_squared.json")]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["status"], "invalid");
}

#[test]
fn runs_are_byte_identical() {
    let args = ["resolve", &path("twin.json"), "--levels", "2"];
    let a = dgwb(&args);
    let b = dgwb(&args);
    assert_eq!(a, b);
    assert!(!a.1.contains("timing_ms"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["hypercover", &path("atlas_cover.json"), "--levels", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_dgwb")).args(args).env("DGWB_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_dgwb")).args(args).env("DGWB_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_dgwb")).args(args).env("DGWB_THREADS", "0").output().unwrap();
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn timing_is_opt_in() {
    let (_, stdout, _) = dgwb(&["--timing", "validate", &path("qx.json")]);
    assert!(stdout.contains("timing_ms"));
}

#[test]
fn text_format() {
    let (code, stdout, _) = dgwb(&["--format", "text", "validate", &path("koszul.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("status: valid"), "{stdout}");
}

#[test]
fn emitted_algebras_parse_back() {
    for a in [fixtures::koszul(), fixtures::twin_koszul(), fixtures::polynomial(&["x", "y"])] {
        let text = serde_json::to_string(&a.to_json_value()).unwrap();
        assert_eq!(DgAlgebra::from_json_str(&text).unwrap(), a);
    }
}

#[test]
fn emitted_resolution_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("res.json").display().to_string();
    assert_eq!(dgwb(&["resolve", &path("koszul.json"), "--levels", "2", "--emit", &res]).0, 0);
    let (code, stdout, _) = dgwb(&["verify-special", &res]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(dgwb(&["matching", &res, "--level", "1"]).0, 0);
}
