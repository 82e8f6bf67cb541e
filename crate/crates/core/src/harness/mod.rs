//! Config-driven experiment runner behind the `fracdyn` binary.
//!
//! A run solves the configured problem, evaluates the configured bound and
//! checks, and writes a CSV of the trajectory plus a plain-text report.
//!
//! CSV columns: `tau,x,dbeta_x,dalpha_x,bound_curve,x_over_tau_alpha`, one
//! row per grid node, every value in `{:.16e}` format. `bound_curve` is NaN
//! without a bound and `inf` where the bound blew up; `x_over_tau_alpha` is
//! NaN at τ = 0.
//!
//! Report lines: `CHECK <name>: PASS|FAIL|FAILED-HYPOTHESIS measured=<v>
//! expected=<v> tol=<v>`, followed by `OVERALL: PASS|FAIL`.
//!
//! Exit codes of the binary: 0 when every check passes, 2 when a bound's
//! hypotheses fail, 1 for any other failed check or for solver, config and
//! I/O errors.

pub mod catalog;
pub mod config;
mod run;

use std::path::{Path, PathBuf};

pub use catalog::list_catalog;
pub use config::ExperimentConfig;
pub use run::{
    build_bound, build_spec, convergence_study, pin, run, solution_csv, CheckOutcome, LevelResult, RunReport, Status,
    CSV_HEADER, DEFAULT_WINDOW_FRACTION,
};

use crate::{Error, Result};

/// Configs shipped with the crate, by name.
pub const BUILTIN: &[(&str, &str)] = &[
    ("sublinear_growth", include_str!("../../configs/sublinear_growth.json")),
    ("product_source", include_str!("../../configs/product_source.json")),
    ("bounded_product", include_str!("../../configs/bounded_product.json")),
    ("zero_smoke", include_str!("../../configs/zero_smoke.json")),
    (
        "hypothesis_violation",
        include_str!("../../configs/hypothesis_violation.json"),
    ),
    (
        "manufactured_direct",
        include_str!("../../configs/manufactured_direct.json"),
    ),
    ("zero_sequential", include_str!("../../configs/zero_sequential.json")),
    ("semigroup", include_str!("../../configs/semigroup.json")),
];

/// Directory the builtin configs' relative paths resolve against.
pub fn builtin_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

/// Loads `arg` as a config file, or as a builtin name when no such file
/// exists.
pub fn load_config(arg: &str) -> Result<ExperimentConfig> {
    let path = Path::new(arg);
    if path.is_file() {
        return ExperimentConfig::load(path);
    }
    let (_, text) = BUILTIN
        .iter()
        .find(|(name, _)| *name == arg)
        .ok_or_else(|| Error::Config(format!("{arg} is neither a file nor a builtin config")))?;
    let mut cfg = ExperimentConfig::from_json(text)?;
    if let Some(rel) = cfg.expectations.take() {
        cfg.expectations = Some(builtin_dir().join(rel));
    }
    Ok(cfg)
}
