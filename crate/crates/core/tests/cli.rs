use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracdyn")).args(args).output().unwrap()
}

fn solve_into(config: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["solve", config, "--out-dir", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    fracdyn(&args)
}

#[test]
fn same_seed_gives_byte_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    solve_into("sublinear_growth", a.path(), &["--seed", "7"]);
    solve_into("sublinear_growth", b.path(), &["--seed", "7"]);
    let ca = fs::read(a.path().join("sublinear_growth.csv")).unwrap();
    let cb = fs::read(b.path().join("sublinear_growth.csv")).unwrap();
    assert!(!ca.is_empty());
    assert_eq!(ca, cb);
}

#[test]
fn forced_hypothesis_violation_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve_into("hypothesis_violation", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAILED-HYPOTHESIS"));
}

#[test]
fn zero_smoke_passes_and_writes_documented_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = solve_into("zero_smoke", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = fs::read_to_string(dir.path().join("zero_smoke.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(fracdyn::harness::CSV_HEADER));
    let cfg = fracdyn::harness::load_config("zero_smoke").unwrap();
    assert_eq!(lines.count(), cfg.grid.n_steps + 1);
    let report = fs::read_to_string(dir.path().join("zero_smoke.txt")).unwrap();
    let verdicts = report.lines().filter(|l| l.starts_with("CHECK ")).count();
    assert_eq!(verdicts, cfg.checks.len());
}

#[test]
fn unreadable_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"name": "x", "typo_field": 1}"#).unwrap();
    assert_eq!(fracdyn(&["solve", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn studies_report_orders() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = fracdyn(&["study", "manufactured_direct", "--out-dir", d]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("n_steps=")).count(), 3);
    let out = fracdyn(&["study", "zero_sequential", "--out-dir", d]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("order=exact"));
}

#[test]
fn catalog_lists_entries_with_formulas() {
    let out = fracdyn(&["catalog"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for id in [
        "exp_sublinear",
        "singular_product",
        "manufactured_power_mu",
        "zero_rhs",
        "sublinear_growth",
        "product_source",
    ] {
        assert!(text.contains(id), "missing {id}");
    }
}
