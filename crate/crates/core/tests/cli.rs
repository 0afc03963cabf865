//! End-to-end tests of the command-line binary: exit-code contract,
//! determinism of artifacts, and the JSON round trip.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vtcrystal"))
}

fn datum_file(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("vtcrystal-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn a1() -> PathBuf {
    datum_file("a1.json", r#"{"Lambda": [[1]]}"#)
}

fn a2() -> PathBuf {
    datum_file("a2.json", r#"{"Lambda": [[1, -1], [0, 1]]}"#)
}

#[test]
fn crystal_dot_chain() {
    let out = bin()
        .args(["crystal", "--datum"])
        .arg(a1())
        .args(["--hw", "2", "--depth", "4", "--format", "dot"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("->").count(), 2);
    assert!(text.contains("label=\"1\""));
}

#[test]
fn crystal_binf_json() {
    let out = bin()
        .args(["crystal", "--datum"])
        .arg(a2())
        .args(["--binf", "--depth", "3", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["highest_weight"], serde_json::json!("binf"));
    assert!(doc["nodes"].as_array().unwrap().len() >= 10);
}

#[test]
fn missing_datum_is_exit_2() {
    let out = bin()
        .args(["crystal", "--datum", "/nonexistent/x.json", "--hw", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_suite_is_exit_2() {
    let out = bin()
        .args(["check", "--datum"])
        .arg(a1())
        .args(["--suite", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_datum_is_exit_2() {
    let bad = datum_file("bad.json", r#"{"Lambda": [[2, 0], [0, 2]]}"#);
    let out = bin()
        .args(["crystal", "--datum"])
        .arg(bad)
        .args(["--hw", "1,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_suite_passes() {
    let out = bin()
        .args(["check", "--datum"])
        .arg(a1())
        .args(["--suite", "ortho", "--hw", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ortho: pass"));
}

#[test]
fn deterministic_artifacts() {
    let run = || {
        bin()
            .args(["crystal", "--datum"])
            .arg(a2())
            .args(["--hw", "1,1", "--depth", "8", "--format", "json"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
    let global = || {
        bin()
            .args(["global", "--datum"])
            .arg(a2())
            .args(["--depth", "2", "--format", "tsv"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(global(), global());
}

#[test]
fn global_table_sl2() {
    let out = bin()
        .args(["global", "--datum"])
        .arg(a1())
        .args(["--depth", "4", "--t1-compare"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for n in 2..=4 {
        assert!(
            text.contains(&format!("f1^({})", n)),
            "missing divided power {} in:\n{}",
            n,
            text
        );
    }
}

#[test]
fn depth_beyond_cap_is_exit_2() {
    let out = bin()
        .args(["crystal", "--datum"])
        .arg(a2())
        .args(["--binf", "--depth", "40"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_dir_roundtrip() {
    let dir = std::env::temp_dir().join("vtcrystal-cache-test");
    let _ = std::fs::remove_dir_all(&dir);
    let run = || {
        bin()
            .args(["crystal", "--datum"])
            .arg(a2())
            .args(["--binf", "--depth", "2", "--format", "json"])
            .env("VTCRYSTAL_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(std::fs::read_dir(&dir).unwrap().count() > 0);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}
