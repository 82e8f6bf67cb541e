//! Predictor–corrector solvers for the two Caputo initial-value problems.
//!
//! * **Direct**: `D^α x = f(τ, x, D^β x)`, `x(0) = b`, `0 ≤ β < α < 1`. Solved
//!   through `x = b + I^α f` and `D^β x = I^{α−β} f`.
//! * **Sequential**: `(D^α x)' = f(τ, x, D^β x)`, `x(0) = b₁`,
//!   `D^α x(0) = b₂`, `0 < β < α < 1`. Solved through
//!   `x = b₁ + b₂ τ^α/Γ(α+1) + I^{α+1} f` and
//!   `D^β x = b₂ τ^{α−β}/Γ(α−β+1) + I^{α−β+1} f`.
//!
//! Both march over a uniform grid with the fractional Adams scheme: a
//! product-rectangle predictor followed by a product-trapezoid corrector
//! iterated to a fixed point in the pair (x_n, D^β x_n). The history sums are
//! plain O(N²) convolutions.

pub mod catalog;

use std::fmt;
use std::sync::Arc;

use crate::fracops::weights::{RectangleWeights, TrapezoidWeights};
use crate::fracops::{gamma_pos, rl_integral, FractionalOrder, GridFunction};
use crate::{Error, Result};

type RhsFn = dyn Fn(f64, f64, f64) -> f64 + Send + Sync;

/// The right-hand side f(τ, u, v), where u stands for x and v for D^β x.
#[derive(Clone)]
pub struct RhsFunction {
    name: String,
    f: Arc<RhsFn>,
    singular_at_origin: bool,
}

impl RhsFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        RhsFunction {
            name: name.into(),
            f: Arc::new(f),
            singular_at_origin: false,
        }
    }

    /// Marks f as unbounded at τ = 0 (an integrable τ^γ prefactor with γ < 0).
    /// The solver then never evaluates f at the origin and integrates the
    /// first cell with its right-endpoint value instead.
    pub fn singular_at_origin(mut self, singular: bool) -> Self {
        self.singular_at_origin = singular;
        self
    }

    pub fn is_singular_at_origin(&self) -> bool {
        self.singular_at_origin
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, tau: f64, u: f64, v: f64) -> f64 {
        (self.f)(tau, u, v)
    }
}

impl fmt::Debug for RhsFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RhsFunction")
            .field("name", &self.name)
            .field("singular_at_origin", &self.singular_at_origin)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Direct,
    Sequential,
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    kind: ProblemKind,
    alpha: FractionalOrder,
    beta: f64,
    b1: f64,
    b2: f64,
    rhs: RhsFunction,
}

impl ProblemSpec {
    /// `D^α x = f(τ, x, D^β x)`, `x(0) = b`, with 0 ≤ β < α < 1.
    pub fn direct(alpha: f64, beta: f64, b: f64, rhs: RhsFunction) -> Result<Self> {
        if !(0.0 <= beta && beta < alpha && alpha < 1.0) {
            return Err(Error::domain(format!(
                "direct problem needs 0 <= beta < alpha < 1 (alpha = {alpha}, beta = {beta})"
            )));
        }
        Self::checked_initial(b, 0.0)?;
        Ok(ProblemSpec {
            kind: ProblemKind::Direct,
            alpha: FractionalOrder::new(alpha)?,
            beta,
            b1: b,
            b2: 0.0,
            rhs,
        })
    }

    /// `(D^α x)' = f(τ, x, D^β x)`, `x(0) = b₁`, `D^α x(0) = b₂`, with
    /// 0 < β < α < 1.
    pub fn sequential(alpha: f64, beta: f64, b1: f64, b2: f64, rhs: RhsFunction) -> Result<Self> {
        if !(0.0 < beta && beta < alpha && alpha < 1.0) {
            return Err(Error::domain(format!(
                "sequential problem needs 0 < beta < alpha < 1 (alpha = {alpha}, beta = {beta})"
            )));
        }
        Self::checked_initial(b1, b2)?;
        Ok(ProblemSpec {
            kind: ProblemKind::Sequential,
            alpha: FractionalOrder::new(alpha)?,
            beta,
            b1,
            b2,
            rhs,
        })
    }

    fn checked_initial(b1: f64, b2: f64) -> Result<()> {
        if b1.is_finite() && b2.is_finite() {
            Ok(())
        } else {
            Err(Error::domain("initial data must be finite"))
        }
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.value()
    }

    pub fn alpha_order(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// x(0) (called b for the direct problem).
    pub fn b1(&self) -> f64 {
        self.b1
    }

    /// D^α x(0); zero for the direct problem.
    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn rhs(&self) -> &RhsFunction {
        &self.rhs
    }

    /// The explicit (non-convolution) part of x at τ.
    fn x_inhomogeneity(&self, tau: f64) -> f64 {
        match self.kind {
            ProblemKind::Direct => self.b1,
            ProblemKind::Sequential => {
                let a = self.alpha();
                self.b1 + self.b2 * tau.powf(a) / gamma_pos(a + 1.0)
            }
        }
    }

    /// The explicit part of D^β x at τ.
    fn v_inhomogeneity(&self, tau: f64) -> f64 {
        match self.kind {
            ProblemKind::Direct => 0.0,
            ProblemKind::Sequential => {
                let m = self.alpha() - self.beta;
                self.b2 * tau.powf(m) / gamma_pos(m + 1.0)
            }
        }
    }

    /// Kernel orders of the x and D^β x convolutions.
    fn kernel_orders(&self) -> (f64, f64) {
        let a = self.alpha();
        match self.kind {
            ProblemKind::Direct => (a, a - self.beta),
            ProblemKind::Sequential => (a + 1.0, a - self.beta + 1.0),
        }
    }

    /// For the direct problem with β = 0 the third argument of f is x itself.
    fn v_is_x(&self) -> bool {
        self.kind == ProblemKind::Direct && self.beta == 0.0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Corrector evaluations allowed per node before the step is declared failed.
    pub max_corrector_iterations: usize,
    /// Relative stopping threshold: |Δ| ≤ tol·(1 + |value|) for both x and D^β x.
    pub corrector_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_corrector_iterations: 10,
            corrector_tol: 1e-12,
        }
    }
}

/// Grid histories of x, D^β x and D^α x.
///
/// For the direct problem `dalpha_x` is the f history itself; for a singular
/// right-hand side its node-0 entry repeats node 1 (f is never evaluated at
/// the origin).
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: GridFunction,
    pub dbeta_x: GridFunction,
    pub dalpha_x: GridFunction,
    pub spec: ProblemSpec,
    /// Corrector evaluations used at each node (0 at node 0).
    pub corrector_iterations: Vec<usize>,
}

pub fn solve(spec: &ProblemSpec, t_end: f64, n_steps: usize) -> Result<Solution> {
    solve_with(spec, t_end, n_steps, &SolverOptions::default())
}

pub fn solve_with(spec: &ProblemSpec, t_end: f64, n_steps: usize, opts: &SolverOptions) -> Result<Solution> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain(format!("t_end must be positive, got {t_end}")));
    }
    if n_steps < 2 {
        return Err(Error::domain(format!("need at least 2 steps, got {n_steps}")));
    }
    march(spec, t_end, n_steps, opts)
}

pub fn solve_direct(spec: &ProblemSpec, t_end: f64, n_steps: usize) -> Result<Solution> {
    if spec.kind != ProblemKind::Direct {
        return Err(Error::domain("solve_direct called with a sequential problem"));
    }
    solve(spec, t_end, n_steps)
}

pub fn solve_sequential(spec: &ProblemSpec, t_end: f64, n_steps: usize) -> Result<Solution> {
    if spec.kind != ProblemKind::Sequential {
        return Err(Error::domain("solve_sequential called with a direct problem"));
    }
    solve(spec, t_end, n_steps)
}

fn checked_eval(rhs: &RhsFunction, node: usize, tau: f64, u: f64, v: f64) -> Result<f64> {
    let value = rhs.eval(tau, u, v);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteRhs { node, tau })
    }
}

fn converged(old: f64, new: f64, tol: f64) -> bool {
    (new - old).abs() <= tol * (1.0 + new.abs())
}

fn march(spec: &ProblemSpec, t_end: f64, n_steps: usize, opts: &SolverOptions) -> Result<Solution> {
    let h = t_end / n_steps as f64;
    let (order_x, order_v) = spec.kernel_orders();
    let trap_x = TrapezoidWeights::new(order_x, h, n_steps);
    let rect_x = RectangleWeights::new(order_x, h, n_steps);
    let trap_v = TrapezoidWeights::new(order_v, h, n_steps);
    let rect_v = RectangleWeights::new(order_v, h, n_steps);
    let v_is_x = spec.v_is_x();
    let rhs = &spec.rhs;
    let singular = rhs.is_singular_at_origin();

    let mut xs = vec![0.0; n_steps + 1];
    let mut vs = vec![0.0; n_steps + 1];
    let mut fs = vec![0.0; n_steps + 1];
    let mut iterations = vec![0usize; n_steps + 1];

    xs[0] = spec.b1;
    vs[0] = if v_is_x { spec.b1 } else { 0.0 };
    if !singular {
        fs[0] = checked_eval(rhs, 0, 0.0, xs[0], vs[0])?;
    }

    for n in 1..=n_steps {
        let tau = n as f64 * h;
        let px = spec.x_inhomogeneity(tau);
        let pv = spec.v_inhomogeneity(tau);

        // With the open first cell, f_0 is tied to f_1 while solving node 1.
        let tied_start = singular && n == 1;
        if tied_start {
            fs[0] = checked_eval(rhs, 1, tau, xs[0], vs[0])?;
        }

        let (hist_x, diag_x, hist_v, diag_v) = if tied_start {
            (
                0.0,
                trap_x.diagonal() + trap_x.start(1),
                0.0,
                trap_v.diagonal() + trap_v.start(1),
            )
        } else {
            (
                trap_x.history(&fs, n),
                trap_x.diagonal(),
                trap_v.history(&fs, n),
                trap_v.diagonal(),
            )
        };

        let mut x = px + rect_x.sum(&fs, n);
        let mut v = if v_is_x { x } else { pv + rect_v.sum(&fs, n) };

        let mut count = 0;
        loop {
            let f = checked_eval(rhs, n, tau, x, v)?;
            let x_new = px + hist_x + diag_x * f;
            let v_new = if v_is_x { x_new } else { pv + hist_v + diag_v * f };
            count += 1;
            let done = converged(x, x_new, opts.corrector_tol) && converged(v, v_new, opts.corrector_tol);
            x = x_new;
            v = v_new;
            if done {
                break;
            }
            if count >= opts.max_corrector_iterations {
                return Err(Error::StepFailure {
                    node: n,
                    tau,
                    iterations: count,
                });
            }
        }

        xs[n] = x;
        vs[n] = v;
        fs[n] = checked_eval(rhs, n, tau, x, v)?;
        if tied_start {
            fs[0] = fs[1];
        }
        iterations[n] = count;
    }

    let x = GridFunction::new(t_end, xs)?;
    let dbeta_x = GridFunction::new(t_end, vs)?;
    let f_hist = GridFunction::new(t_end, fs)?;
    let dalpha_x = match spec.kind {
        ProblemKind::Direct => f_hist,
        ProblemKind::Sequential => f_hist.cumulative_integral().map(|_, v| v + spec.b2)?,
    };
    Ok(Solution {
        x,
        dbeta_x,
        dalpha_x,
        spec: spec.clone(),
        corrector_iterations: iterations,
    })
}

/// Re-evaluates the integral form of the problem from the stored histories
/// and returns the max-norm defect over x and D^β x.
///
/// f is recomputed from (x, D^β x) and pushed through the order-α (and
/// α−β) product-trapezoid integral. For the direct problem this is the same
/// quadrature the corrector solved, so the defect measures the corrector
/// stopping error; for the sequential problem the order-(α+1) integral is
/// split as `I^α ∘ I¹`, a different discretisation, so the defect also
/// carries the quadrature error.
pub fn residual_check(sol: &Solution) -> Result<f64> {
    let spec = &sol.spec;
    let mut fs: Vec<f64> = Vec::with_capacity(sol.x.n_steps() + 1);
    for (j, tau) in sol.x.taus().enumerate() {
        if j == 0 && spec.rhs.is_singular_at_origin() {
            fs.push(0.0);
            continue;
        }
        fs.push(checked_eval(
            &spec.rhs,
            j,
            tau,
            sol.x.values()[j],
            sol.dbeta_x.values()[j],
        )?);
    }
    if spec.rhs.is_singular_at_origin() {
        fs[0] = fs[1];
    }
    let f_hist = GridFunction::new(sol.x.t_end(), fs)?;
    let alpha = spec.alpha_order();
    let a = spec.alpha();

    let (x_rebuilt, v_rebuilt) = match spec.kind {
        ProblemKind::Direct => {
            let x = rl_integral(&f_hist, alpha).map(|_, v| v + spec.b1)?;
            let v = if spec.v_is_x() {
                x.clone()
            } else {
                rl_integral(&f_hist, FractionalOrder::new(a - spec.beta)?)
            };
            (x, v)
        }
        ProblemKind::Sequential => {
            let running = f_hist.cumulative_integral();
            let x = rl_integral(&running, alpha).map(|t, v| v + spec.x_inhomogeneity(t))?;
            let v =
                rl_integral(&running, FractionalOrder::new(a - spec.beta)?).map(|t, v| v + spec.v_inhomogeneity(t))?;
            (x, v)
        }
    };
    Ok(x_rebuilt
        .max_abs_diff(&sol.x)?
        .max(v_rebuilt.max_abs_diff(&sol.dbeta_x)?))
}

#[cfg(test)]
mod tests {
    use super::catalog;
    use super::*;
    use crate::fracops::exact_power_rule;
    use crate::fracops::PowerRuleKind;

    #[test]
    fn spec_invariants() {
        let z = catalog::zero();
        assert!(ProblemSpec::direct(0.5, 0.0, 1.0, z.clone()).is_ok());
        assert!(ProblemSpec::direct(0.5, 0.5, 1.0, z.clone()).is_err());
        assert!(ProblemSpec::direct(1.0, 0.5, 1.0, z.clone()).is_err());
        assert!(ProblemSpec::sequential(0.5, 0.0, 1.0, 1.0, z.clone()).is_err());
        assert!(ProblemSpec::sequential(0.5, 0.2, f64::NAN, 1.0, z).is_err());
    }

    #[test]
    fn zero_rhs_direct_is_constant() {
        let spec = ProblemSpec::direct(0.6, 0.3, 3.0, catalog::zero()).unwrap();
        let sol = solve_direct(&spec, 2.0, 64).unwrap();
        assert!(sol.x.values().iter().all(|&v| v == 3.0));
        assert!(sol.dbeta_x.values().iter().all(|&v| v == 0.0));
        assert_eq!(residual_check(&sol).unwrap(), 0.0);
    }

    #[test]
    fn zero_rhs_sequential_closed_form() {
        let spec = ProblemSpec::sequential(0.5, 0.25, 0.0, 1.0, catalog::zero()).unwrap();
        let sol = solve_sequential(&spec, 1.0, 128).unwrap();
        // x = τ^{1/2}/Γ(3/2); at τ = 1 that is 1.1283791670955126.
        assert!((sol.x.last() - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-12);
        for (t, v) in sol.x.taus().zip(sol.x.values()) {
            let want = exact_power_rule(PowerRuleKind::Integral, 0.5, 1.0, t.max(1e-300)).unwrap();
            assert!((v - if t == 0.0 { 0.0 } else { want }).abs() < 1e-12);
        }
        assert!(sol.dalpha_x.values().iter().all(|&v| v == 1.0));

        let spec = ProblemSpec::sequential(0.5, 0.25, 5.0, 0.0, catalog::zero()).unwrap();
        let sol = solve_sequential(&spec, 1.0, 16).unwrap();
        assert!(sol.x.values().iter().all(|&v| v == 5.0));
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let spec = ProblemSpec::direct(0.6, 0.3, 3.0, catalog::zero()).unwrap();
        assert!(solve_sequential(&spec, 1.0, 8).is_err());
        assert!(solve_direct(&spec, 1.0, 1).is_err());
    }

    #[test]
    fn manufactured_direct_square() {
        let rhs = catalog::manufactured_power_direct(0.5, 2.0).unwrap();
        let spec = ProblemSpec::direct(0.5, 0.25, 0.0, rhs).unwrap();
        let sol = solve_direct(&spec, 1.0, 2048).unwrap();
        let err = sol
            .x
            .taus()
            .zip(sol.x.values())
            .fold(0.0f64, |m, (t, v)| m.max((v - t * t).abs()));
        assert!(err < 1e-3, "max error {err}");
        assert!(residual_check(&sol).unwrap() < 1e-3);
    }

    #[test]
    fn beta_zero_feeds_x_as_third_argument() {
        // D^{1/2} x = −v with v = x: the solution must decay from 1.
        let rhs = RhsFunction::new("neg_v", |_, _, v| -v);
        let spec = ProblemSpec::direct(0.5, 0.0, 1.0, rhs).unwrap();
        let sol = solve_direct(&spec, 1.0, 256).unwrap();
        assert_eq!(sol.x, sol.dbeta_x);
        assert!(sol.x.last() < 1.0 && sol.x.last() > 0.0);
    }

    #[test]
    fn non_finite_rhs_reports_location() {
        let rhs = RhsFunction::new("blowup", |t, _, _| if t > 0.5 { f64::NAN } else { 0.0 });
        let spec = ProblemSpec::direct(0.5, 0.2, 1.0, rhs).unwrap();
        match solve_direct(&spec, 1.0, 10) {
            Err(Error::NonFiniteRhs { node, .. }) => assert_eq!(node, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn iteration_cap_is_an_error() {
        // A stiff linear source cannot settle in a single corrector pass.
        let rhs = RhsFunction::new("stiff", |_, u, _| -50.0 * u);
        let spec = ProblemSpec::direct(0.5, 0.2, 1.0, rhs).unwrap();
        let opts = SolverOptions {
            max_corrector_iterations: 1,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_with(&spec, 1.0, 16, &opts),
            Err(Error::StepFailure { node: 1, .. })
        ));
    }
}
