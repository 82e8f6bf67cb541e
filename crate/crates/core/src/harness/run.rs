use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::Instant;

use crate::asymptotics::{boundedness_verdict, lhopital_limit_residual, lhopital_residual, power_slope, Integrand};
use crate::bihari_bounds::{
    fractional_source_envelope, power_growth_envelope, uniform_bound, BoundReport, Envelope, MClassFunction,
    PhiFunction,
};
use crate::fde_solvers::{residual_check, solve, ProblemKind, ProblemSpec, Solution};
use crate::fracops::{semigroup_residual, FractionalOrder, GridFunction};
use crate::{Error, Result};

use super::catalog;
use super::config::{
    BoundConfig, CheckConfig, ExperimentConfig, IntegrandConfig, MClassConfig, PhiConfig, ProblemKindConfig,
    StudyTarget,
};

/// Default trailing-window fraction for slope checks.
pub const DEFAULT_WINDOW_FRACTION: f64 = 0.25;
/// Study errors at or below this are reported as exact.
const ROUND_OFF: f64 = 1e-12;

pub const CSV_HEADER: &str = "tau,x,dbeta_x,dalpha_x,bound_curve,x_over_tau_alpha";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    FailedHypothesis,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::FailedHypothesis => "FAILED-HYPOTHESIS",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    pub measured: String,
    pub expected: String,
    pub tol: String,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct LevelResult {
    pub n_steps: usize,
    pub error: f64,
    /// log₂ of the error ratio to the previous level; `None` on the first
    /// level or when both errors are at round-off.
    pub order: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub checks: Vec<CheckOutcome>,
    /// Deterministic scalar outputs; `pin` writes these as expectations.
    pub measurements: BTreeMap<String, f64>,
    pub levels: Vec<LevelResult>,
    pub bound_summary: Option<String>,
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn has_hypothesis_failure(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::FailedHypothesis)
    }

    /// 0 when every check passes, 2 when any hypothesis failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.has_hypothesis_failure() {
            2
        } else if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let p = &c.problem;
        let mut out = String::new();
        let _ = writeln!(out, "# fracdyn report: {}", c.name);
        let _ = writeln!(out, "seed: {}", c.seed);
        let _ = writeln!(
            out,
            "problem: kind={:?} alpha={} beta={} b1={} b2={} rhs={}",
            p.kind, p.alpha, p.beta, p.b1, p.b2, p.rhs.id
        );
        let _ = writeln!(out, "grid: t_end={} n_steps={}", c.grid.t_end, c.grid.n_steps);
        if let Some(b) = &self.bound_summary {
            let _ = writeln!(out, "bound: {b}");
        }
        for l in &self.levels {
            let order = l.order.map_or_else(|| "-".to_string(), |o| format!("{o:.4}"));
            let _ = writeln!(
                out,
                "LEVEL n_steps={} max_error={:.6e} order={order}",
                l.n_steps, l.error
            );
        }
        for ch in &self.checks {
            let _ = writeln!(
                out,
                "CHECK {}: {} measured={} expected={} tol={}",
                ch.name, ch.status, ch.measured, ch.expected, ch.tol
            );
            if let Some(d) = &ch.detail {
                let _ = writeln!(out, "    {d}");
            }
        }
        for (k, v) in &self.measurements {
            let _ = writeln!(out, "VALUE {k} = {v:.16e}");
        }
        for (stage, secs) in &self.timings {
            let _ = writeln!(out, "TIMING {stage}: {secs:.3} s");
        }
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "OVERALL: {verdict}");
        let echo = serde_json::to_string(&self.config).unwrap_or_default();
        let _ = writeln!(out, "config: {echo}");
        out
    }
}

fn timed<T>(timings: &mut Vec<(String, f64)>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((stage.to_string(), start.elapsed().as_secs_f64()));
    out
}

pub fn build_spec(cfg: &ExperimentConfig) -> Result<ProblemSpec> {
    let p = &cfg.problem;
    let kind = match p.kind {
        ProblemKindConfig::Direct => ProblemKind::Direct,
        ProblemKindConfig::Sequential => ProblemKind::Sequential,
    };
    let rhs = catalog::build(&p.rhs.id, &p.rhs.params, kind, p.alpha)?;
    match kind {
        ProblemKind::Direct => {
            if p.b2 != 0.0 {
                return Err(Error::Config("b2 applies to sequential problems only".into()));
            }
            ProblemSpec::direct(p.alpha, p.beta, p.b1, rhs)
        }
        ProblemKind::Sequential => ProblemSpec::sequential(p.alpha, p.beta, p.b1, p.b2, rhs),
    }
}

fn phi_from(c: &PhiConfig) -> Result<PhiFunction> {
    match *c {
        PhiConfig::Power { r } => PhiFunction::power(r),
        PhiConfig::Identity => Ok(PhiFunction::identity()),
        PhiConfig::Constant { c } => PhiFunction::constant(c),
        PhiConfig::ShiftedPower { shift, r } => PhiFunction::shifted_power(shift, r),
    }
}

fn integrand_from(c: &IntegrandConfig) -> Result<Integrand> {
    match *c {
        IntegrandConfig::Zero => Ok(Integrand::zero()),
        IntegrandConfig::ExpDecay { rate, coefficient } => Integrand::exp_decay(rate, coefficient),
        IntegrandConfig::PowerDecay { exponent, coefficient } => Integrand::power_decay(exponent, coefficient),
        IntegrandConfig::PowerExp {
            power,
            rate,
            coefficient,
        } => Integrand::power_exp(power, rate, coefficient),
    }
}

fn mclass_from(c: &MClassConfig) -> Result<MClassFunction> {
    match *c {
        MClassConfig::Zero => Ok(MClassFunction::zero()),
        MClassConfig::LinearExp { a, lambda } => MClassFunction::linear_exp(a, lambda),
        MClassConfig::LogExp { a, lambda } => MClassFunction::log_exp(a, lambda),
        MClassConfig::RationalExp { a, lambda } => MClassFunction::rational_exp(a, lambda),
    }
}

/// Evaluates the configured bound. Hypothesis failures come back as
/// `Ok(Err(..))` so the run can continue; anything else aborts.
pub fn build_bound(
    cfg: &ExperimentConfig,
    spec: &ProblemSpec,
    step: f64,
) -> Result<Option<std::result::Result<BoundReport, Error>>> {
    let Some(b) = &cfg.bound else { return Ok(None) };
    let sequential_only = |what: &str| -> Result<()> {
        if spec.kind() != ProblemKind::Sequential {
            return Err(Error::Config(format!("the {what} bound needs a sequential problem")));
        }
        Ok(())
    };
    let outcome = match b {
        BoundConfig::PowerGrowth { phi, p } => {
            sequential_only("power_growth")?;
            power_growth_envelope(spec.b1(), spec.b2(), spec.alpha(), &integrand_from(p)?, &phi_from(phi)?)
        }
        BoundConfig::FractionalSource { f1, f2 } => {
            sequential_only("fractional_source")?;
            fractional_source_envelope(
                spec.b1(),
                spec.b2(),
                spec.alpha(),
                spec.beta(),
                &mclass_from(f1)?,
                &mclass_from(f2)?,
            )
        }
        BoundConfig::Uniform {
            q,
            phi1,
            phi2,
            h,
            tau0,
            variant,
        } => uniform_bound(
            spec,
            &integrand_from(h)?,
            &phi_from(phi1)?,
            &phi_from(phi2)?,
            *q,
            tau0.unwrap_or(step),
            (*variant).into(),
        ),
    };
    match outcome {
        Ok(r) => Ok(Some(Ok(r))),
        Err(e) if e.is_hypothesis_violation() => Ok(Some(Err(e))),
        Err(e) => Err(e),
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v:.6e}")
}

fn outcome(name: &str, pass: bool, measured: f64, expected: String, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        status: if pass { Status::Pass } else { Status::Fail },
        measured: fmt_num(measured),
        expected,
        tol: fmt_num(tol),
        detail: None,
    }
}

fn failed(name: &str, status: Status, tol: Option<f64>, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        status,
        measured: "NaN".into(),
        expected: "-".into(),
        tol: tol.map_or_else(|| "-".into(), fmt_num),
        detail: Some(detail),
    }
}

fn check_names(checks: &[CheckConfig]) -> Vec<String> {
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    checks
        .iter()
        .map(|c| {
            let k = c.kind_name();
            let n = seen.entry(k).or_insert(0);
            *n += 1;
            if *n == 1 {
                k.to_string()
            } else {
                format!("{k}#{n}")
            }
        })
        .collect()
}

fn load_expectations(path: &Path) -> Result<BTreeMap<String, f64>> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

struct Context<'a> {
    cfg: &'a ExperimentConfig,
    sol: Option<&'a Solution>,
    bound: Option<&'a std::result::Result<BoundReport, Error>>,
    levels: &'a [LevelResult],
    measurements: &'a BTreeMap<String, f64>,
}

fn evaluate(ctx: &Context<'_>, check: &CheckConfig, name: &str) -> CheckOutcome {
    let need_sol = || ctx.sol.ok_or("this check needs a solver run");
    let need_bound = || -> std::result::Result<&BoundReport, Box<CheckOutcome>> {
        match ctx.bound {
            None => Err(Box::new(failed(name, Status::Fail, None, "no bound configured".into()))),
            Some(Err(e)) => Err(Box::new(failed(name, Status::FailedHypothesis, None, e.to_string()))),
            Some(Ok(b)) => Ok(b),
        }
    };
    let with_tol = |mut o: CheckOutcome, tol: f64| {
        o.tol = fmt_num(tol);
        o
    };
    match *check {
        CheckConfig::Slope { tol, window_fraction } => {
            let Ok(sol) = need_sol() else {
                return failed(name, Status::Fail, Some(tol), "this check needs a solver run".into());
            };
            let wf = window_fraction.unwrap_or(DEFAULT_WINDOW_FRACTION);
            match power_slope(sol, wf) {
                Ok(s) => {
                    let rel = s.relative_spread();
                    let mut o = outcome(name, rel < tol, rel, fmt_num(0.0), tol);
                    o.detail = Some(format!(
                        "raw x/tau^alpha at T = {:.10}, Aitken = {:.10}, window fraction = {wf}",
                        s.raw_tail, s.accelerated
                    ));
                    o
                }
                Err(e) => failed(name, Status::Fail, Some(tol), e.to_string()),
            }
        }
        CheckConfig::Lhopital { tol } | CheckConfig::LhopitalLimit { tol } => {
            let Ok(sol) = need_sol() else {
                return failed(name, Status::Fail, Some(tol), "this check needs a solver run".into());
            };
            let r = if matches!(check, CheckConfig::Lhopital { .. }) {
                lhopital_residual(sol)
            } else {
                lhopital_limit_residual(sol)
            };
            match r {
                Ok(r) => outcome(name, r < tol, r, fmt_num(0.0), tol),
                Err(e) => failed(name, Status::Fail, Some(tol), e.to_string()),
            }
        }
        CheckConfig::BoundEnvelope { tol } => {
            let b = match need_bound() {
                Ok(b) => b,
                Err(o) => return with_tol(*o, tol),
            };
            let Ok(sol) = need_sol() else {
                return failed(name, Status::Fail, Some(tol), "this check needs a solver run".into());
            };
            let ratio = b.envelope_ratio(sol);
            let mut o = outcome(name, ratio <= 1.0 + tol, ratio, fmt_num(1.0), tol);
            o.detail = Some("max over nodes of |x| / envelope".into());
            o
        }
        CheckConfig::Boundedness { tol } => {
            let b = match need_bound() {
                Ok(b) => b,
                Err(o) => return with_tol(*o, tol),
            };
            let Ok(sol) = need_sol() else {
                return failed(name, Status::Fail, Some(tol), "this check needs a solver run".into());
            };
            let tau0 = b.constant("tau0").unwrap_or(sol.x.step());
            match boundedness_verdict(sol, b, tau0) {
                Ok(v) => {
                    let worst = v.sup_x.max(v.sup_dbeta);
                    let ratio = worst / v.bound;
                    let pass = worst.is_finite() && ratio <= 1.0 + tol;
                    let mut o = outcome(name, pass, ratio, fmt_num(1.0), tol);
                    o.detail = Some(format!(
                        "sup|x| = {:.10e}, sup_(tau >= {tau0:.3e}) |D^beta x| = {:.10e}, C = {:.10e}",
                        v.sup_x, v.sup_dbeta, v.bound
                    ));
                    o
                }
                Err(e) => failed(name, Status::Fail, Some(tol), e.to_string()),
            }
        }
        CheckConfig::Hypothesis => match need_bound() {
            Ok(b) => {
                let main = match b.envelope {
                    Envelope::TwoBranch { c2, .. } => c2,
                    Envelope::PowerOffset { coefficient, .. } => coefficient,
                    Envelope::Constant { value } => value,
                };
                CheckOutcome {
                    name: name.to_string(),
                    status: Status::Pass,
                    measured: fmt_num(main),
                    expected: "holds".into(),
                    tol: "-".into(),
                    detail: Some(format!("{} bound constructed", b.source)),
                }
            }
            Err(o) => *o,
        },
        CheckConfig::Residual { tol } => {
            let Ok(sol) = need_sol() else {
                return failed(name, Status::Fail, Some(tol), "this check needs a solver run".into());
            };
            match residual_check(sol) {
                Ok(r) => outcome(name, r < tol, r, fmt_num(0.0), tol),
                Err(e) => failed(name, Status::Fail, Some(tol), e.to_string()),
            }
        }
        CheckConfig::Order { min_order } => {
            if ctx.levels.len() < 2 {
                return failed(
                    name,
                    Status::Fail,
                    Some(min_order),
                    "empirical order needs a study with at least two refinement levels".into(),
                );
            }
            let orders: Vec<f64> = ctx.levels.iter().filter_map(|l| l.order).collect();
            if orders.is_empty() {
                // every level at round-off
                return CheckOutcome {
                    name: name.to_string(),
                    status: Status::Pass,
                    measured: "exact".into(),
                    expected: fmt_num(min_order),
                    tol: fmt_num(min_order),
                    detail: Some("all errors at round-off level".into()),
                };
            }
            let worst = orders.iter().copied().fold(f64::INFINITY, f64::min);
            outcome(name, worst >= min_order, worst, fmt_num(min_order), min_order)
        }
        CheckConfig::Regression { tol } => {
            let Some(path) = &ctx.cfg.expectations else {
                return failed(name, Status::Fail, Some(tol), "no expectations file configured".into());
            };
            let pinned = match load_expectations(path) {
                Ok(p) => p,
                Err(e) => {
                    return failed(
                        name,
                        Status::Fail,
                        Some(tol),
                        format!("cannot read {}: {e} (run `fracdyn pin`)", path.display()),
                    )
                }
            };
            let mut worst: f64 = 0.0;
            let mut worst_key = String::new();
            for (k, want) in &pinned {
                let Some(got) = ctx.measurements.get(k) else {
                    return failed(name, Status::Fail, Some(tol), format!("no measurement named {k}"));
                };
                let diff = if *want == 0.0 {
                    got.abs()
                } else if want.is_finite() {
                    (got - want).abs() / want.abs()
                } else if got == want {
                    0.0
                } else {
                    f64::INFINITY
                };
                if worst_key.is_empty() || !(diff <= worst) {
                    worst = diff;
                    worst_key = k.clone();
                }
            }
            let mut o = outcome(name, worst <= tol, worst, "pinned".into(), tol);
            o.detail = Some(format!("{} pinned values, worst: {worst_key}", pinned.len()));
            o
        }
    }
}

fn record_measurements(
    sol: &Solution,
    bound: Option<&std::result::Result<BoundReport, Error>>,
) -> BTreeMap<String, f64> {
    let mut m = BTreeMap::new();
    m.insert("x_final".into(), sol.x.last());
    m.insert("dbeta_x_final".into(), sol.dbeta_x.last());
    m.insert("dalpha_x_final".into(), sol.dalpha_x.last());
    m.insert("sup_abs_x".into(), sol.x.max_abs());
    if let Ok(s) = power_slope(sol, DEFAULT_WINDOW_FRACTION) {
        m.insert("slope_raw".into(), s.raw_tail);
        m.insert("slope_accelerated".into(), s.accelerated);
    }
    if let Some(Ok(b)) = bound {
        for (k, v) in &b.constants {
            m.insert(format!("bound.{k}"), *v);
        }
    }
    m
}

fn bound_summary(bound: Option<&std::result::Result<BoundReport, Error>>) -> Option<String> {
    bound.map(|b| match b {
        Ok(r) => {
            let consts: Vec<String> = r.constants.iter().map(|(k, v)| format!("{k}={v:.10e}")).collect();
            format!("{} {}", r.source, consts.join(" "))
        }
        Err(e) => format!("not available: {e}"),
    })
}

/// The CSV body for a solution: one row per node.
pub fn solution_csv(sol: &Solution, bound: Option<&BoundReport>) -> String {
    let alpha = sol.spec.alpha();
    let curve = bound.map(|b| b.curve(&sol.x));
    let mut out = String::with_capacity(120 * (sol.x.n_steps() + 2));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (j, tau) in sol.x.taus().enumerate() {
        let x = sol.x.values()[j];
        let ratio = if tau > 0.0 { x / tau.powf(alpha) } else { f64::NAN };
        let b = curve.as_ref().map_or(f64::NAN, |c| c[j]);
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            tau,
            x,
            sol.dbeta_x.values()[j],
            sol.dalpha_x.values()[j],
            b,
            ratio
        );
    }
    out
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(body.as_bytes())?;
    Ok(())
}

fn finish(report: &RunReport, csv: Option<&str>) -> Result<()> {
    if let Some(body) = csv {
        write_file(&report.config.output.csv_path, body)?;
    }
    write_file(&report.config.output.report_path, &report.render())
}

/// Solves the configured problem, evaluates the bound and every check, and
/// writes the CSV and report. Only solver, configuration and I/O errors
/// abort; hypothesis failures are recorded per check.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    let mut timings = Vec::new();
    let spec = build_spec(cfg)?;
    let sol = timed(&mut timings, "solve", || solve(&spec, cfg.grid.t_end, cfg.grid.n_steps))?;
    let bound = timed(&mut timings, "bound", || build_bound(cfg, &spec, sol.x.step()))?;
    let measurements = record_measurements(&sol, bound.as_ref());
    let names = check_names(&cfg.checks);
    let checks = timed(&mut timings, "checks", || {
        let ctx = Context {
            cfg,
            sol: Some(&sol),
            bound: bound.as_ref(),
            levels: &[],
            measurements: &measurements,
        };
        cfg.checks
            .iter()
            .zip(&names)
            .map(|(c, n)| evaluate(&ctx, c, n))
            .collect()
    });
    let csv = solution_csv(&sol, bound.as_ref().and_then(|b| b.as_ref().ok()));
    let report = RunReport {
        config: cfg.clone(),
        checks,
        measurements,
        levels: Vec::new(),
        bound_summary: bound_summary(bound.as_ref()),
        timings,
    };
    finish(&report, Some(&csv))?;
    Ok(report)
}

fn empirical_orders(errors: &[(usize, f64)]) -> Vec<LevelResult> {
    errors
        .iter()
        .enumerate()
        .map(|(k, &(n, e))| {
            let order = (k > 0)
                .then(|| errors[k - 1].1)
                .filter(|&prev| !(prev <= ROUND_OFF && e <= ROUND_OFF))
                .map(|prev| (prev / e).log2());
            LevelResult {
                n_steps: n,
                error: e,
                order,
            }
        })
        .collect()
}

/// Runs `refinement_levels` grids (n, 2n, 4n, …) and reports max errors and
/// empirical orders. The CSV holds the finest solution when there is one.
pub fn convergence_study(cfg: &ExperimentConfig) -> Result<RunReport> {
    let target = cfg
        .study
        .ok_or_else(|| Error::Config("convergence study needs a `study` target".into()))?;
    let mut timings = Vec::new();
    let p = &cfg.problem;
    let ns: Vec<usize> = (0..cfg.grid.refinement_levels).map(|k| cfg.grid.n_steps << k).collect();
    let mut errors = Vec::with_capacity(ns.len());
    let mut finest = None;
    let mut measurements = BTreeMap::new();
    match target {
        StudyTarget::ExactSolution => {
            let spec = build_spec(cfg)?;
            let exact = catalog::exact_solution(&p.rhs.id, &p.rhs.params, spec.kind(), p.alpha, p.b1, p.b2)?
                .ok_or_else(|| Error::Config(format!("{} has no closed-form solution", p.rhs.id)))?;
            for &n in &ns {
                let sol = timed(&mut timings, &format!("solve n={n}"), || {
                    solve(&spec, cfg.grid.t_end, n)
                })?;
                let reference = GridFunction::from_fn(cfg.grid.t_end, n, &exact)?;
                errors.push((n, sol.x.max_abs_diff(&reference)?));
                finest = Some(sol);
            }
        }
        StudyTarget::Semigroup => {
            let a = FractionalOrder::new(p.alpha)?;
            let b = FractionalOrder::new(p.beta)
                .map_err(|_| Error::Config("semigroup study needs beta in (0, 1]".into()))?;
            for &n in &ns {
                let g = GridFunction::from_fn(cfg.grid.t_end, n, |t| 1.0 - t.cos())?;
                let r = timed(&mut timings, &format!("semigroup n={n}"), || {
                    semigroup_residual(&g, a, b)
                })?;
                errors.push((n, r));
            }
        }
    }
    for &(n, e) in &errors {
        measurements.insert(format!("max_error_n{n}"), e);
    }
    let levels = empirical_orders(&errors);
    let bound = match &finest {
        Some(sol) => build_bound(cfg, &sol.spec, sol.x.step())?,
        None => None,
    };
    if let Some(sol) = &finest {
        for (k, v) in record_measurements(sol, bound.as_ref()) {
            measurements.insert(k, v);
        }
    }
    let names = check_names(&cfg.checks);
    let ctx = Context {
        cfg,
        sol: finest.as_ref(),
        bound: bound.as_ref(),
        levels: &levels,
        measurements: &measurements,
    };
    let checks = cfg
        .checks
        .iter()
        .zip(&names)
        .map(|(c, n)| evaluate(&ctx, c, n))
        .collect();
    let csv = finest
        .as_ref()
        .map(|s| solution_csv(s, bound.as_ref().and_then(|b| b.as_ref().ok())));
    let report = RunReport {
        config: cfg.clone(),
        checks,
        measurements,
        levels,
        bound_summary: bound_summary(bound.as_ref()),
        timings,
    };
    finish(&report, csv.as_deref())?;
    Ok(report)
}

/// Runs the config (as a study when it names one) and writes its
/// measurements to the configured expectations file.
pub fn pin(cfg: &ExperimentConfig) -> Result<(RunReport, std::path::PathBuf)> {
    let path = cfg
        .expectations
        .clone()
        .ok_or_else(|| Error::Config("config has no `expectations` path to pin to".into()))?;
    let report = if cfg.study.is_some() {
        convergence_study(cfg)?
    } else {
        run(cfg)?
    };
    let mut text = serde_json::to_string_pretty(&report.measurements)?;
    text.push('\n');
    write_file(&path, &text)?;
    Ok((report, path))
}
