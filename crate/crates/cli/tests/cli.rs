//! End-to-end tests of the genus-atlas binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_genus-atlas"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn genus2_catalog_path() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/catalog_genus2.txt")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn signatures_lists_candidates() {
    let out = run(&["signatures", "--genus", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "84 (0; 2,3,7)"), "{text}");
    assert!(text.lines().any(|l| l == "48 (0; 2,3,8)"), "{text}");
    assert_eq!(text.lines().count(), 33);
}

#[test]
fn signatures_order_filter() {
    let out = run(&["signatures", "--genus", "2", "--order", "48"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "48 (0; 2,3,8)");
}

#[test]
fn signatures_rejects_genus_below_two() {
    let out = run(&["signatures", "--genus", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_catalog_passes_on_bundled() {
    let out = run(&["verify-catalog", "--catalog", &genus2_catalog_path()]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("catalog OK"));
}

#[test]
fn verify_catalog_flags_bad_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "#covered-orders:1-8\n8 1 NotOrder8 2 (1,2)\n").unwrap();
    let out = run(&["verify-catalog", "--catalog", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("VIOLATION"));
}

#[test]
fn malformed_catalog_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "#covered-orders:1-8\n3 1 C3 3 (1,2,2)\n").unwrap();
    let out = run(&["verify-catalog", "--catalog", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_genus_two_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.jsonl");
    let out = run(&[
        "classify",
        "--genus",
        "2",
        "--catalog",
        &genus2_catalog_path(),
        "--db",
        db.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("nu(2) = 6"), "{}", stdout(&out));

    // db got written with a trailer; nu-table and plot-csv agree
    let out = run(&["nu-table", "--db", db.to_str().unwrap()]);
    assert_eq!(stdout(&out), "g,nu(g)\n2,6\n");
    let csv = dir.path().join("plot.csv");
    let out = run(&[
        "plot-csv",
        "--db",
        db.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "genus,nu\n2,6\n");

    // re-running is idempotent
    let out = run(&[
        "classify",
        "--genus",
        "2",
        "--catalog",
        &genus2_catalog_path(),
        "--db",
        db.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("already complete"));
}

#[test]
fn classify_coverage_abort_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.txt");
    std::fs::write(&small, "#covered-orders:1-12\n").unwrap();
    let db = dir.path().join("db.jsonl");
    let out = run(&[
        "classify",
        "--genus",
        "2",
        "--catalog",
        small.to_str().unwrap(),
        "--db",
        db.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("48"), "{err}");
    assert!(!db.exists(), "no db written on abort");
}

#[test]
fn classify_genus_three_requires_complete_db() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.jsonl");
    let out = run(&[
        "classify",
        "--genus",
        "3",
        "--catalog",
        &genus2_catalog_path(),
        "--db",
        db.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn classify_verbose_logs_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.jsonl");
    let out = run(&[
        "classify",
        "--genus",
        "2",
        "--catalog",
        &genus2_catalog_path(),
        "--db",
        db.to_str().unwrap(),
        "--verbose",
        "--jobs",
        "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("REJECT "), "{}", stdout(&out));
}

#[test]
fn corrupt_db_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.jsonl");
    std::fs::write(&db, "garbage\n").unwrap();
    let out = run(&["nu-table", "--db", db.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}
