//! Riemann–Liouville integration and Caputo differentiation on uniform grids.
//!
//! Both operators take the left endpoint at 0 and return 0 at node 0:
//! `I^α g(0⁺) = 0` for bounded g and `D^α g(0⁺) = 0` for absolutely
//! continuous g with integrable derivative.
//!
//! * [`rl_integral`]: product trapezoid rule (piecewise-linear g integrated
//!   exactly against the weakly singular kernel). Order 1 is the ordinary
//!   trapezoid rule.
//! * [`caputo_derivative`]: L1 scheme (piecewise-linear g, exact kernel
//!   integration of g′ against (τ − s)^{−α}).
//! * [`exact_power_rule`]: closed forms for power functions, used as oracles.

mod gamma;
mod grid;
pub(crate) mod weights;

pub(crate) use gamma::gamma_pos;
pub use gamma::{beta_fn, gamma_fn, ln_gamma};
pub use grid::GridFunction;

use crate::{Error, Result};
use weights::{first_difference, TrapezoidWeights};

/// A fractional order in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(FractionalOrder(value))
        } else {
            Err(Error::domain(format!(
                "fractional order must lie in (0, 1], got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// Riemann–Liouville integral of any positive order on the grid of `g`.
pub(crate) fn rl_integral_order(g: &GridFunction, order: f64) -> GridFunction {
    debug_assert!(order > 0.0);
    if order == 1.0 {
        return g.cumulative_integral();
    }
    let n_steps = g.n_steps();
    let weights = TrapezoidWeights::new(order, g.step(), n_steps);
    let v = g.values();
    let mut out = vec![0.0; n_steps + 1];
    for n in 1..=n_steps {
        out[n] = weights.history(v, n) + weights.diagonal() * v[n];
    }
    GridFunction::new(g.t_end(), out).expect("integral of finite samples is finite")
}

/// Left-sided Riemann–Liouville integral `I^α g` at every node.
pub fn rl_integral(g: &GridFunction, alpha: FractionalOrder) -> GridFunction {
    rl_integral_order(g, alpha.value())
}

/// Left-sided Caputo derivative `D^α g` at every node.
///
/// The samples must come from an absolutely continuous function. For α = 1
/// this is the backward difference quotient.
pub fn caputo_derivative(g: &GridFunction, alpha: FractionalOrder) -> GridFunction {
    let a = alpha.value();
    let n_steps = g.n_steps();
    let h = g.step();
    let v = g.values();
    let diffs: Vec<f64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = vec![0.0; n_steps + 1];
    if a == 1.0 {
        for n in 1..=n_steps {
            out[n] = diffs[n - 1] / h;
        }
    } else {
        let sigma = 1.0 - a;
        let scale = h.powf(-a) / gamma_pos(2.0 - a);
        // b[k] = k^{1−α} − (k−1)^{1−α} weights the difference k cells back.
        let b: Vec<f64> = (0..=n_steps)
            .map(|k| if k == 0 { 0.0 } else { first_difference(k, sigma) })
            .collect();
        for n in 1..=n_steps {
            let s: f64 = diffs[..n].iter().zip(b[1..=n].iter().rev()).map(|(d, w)| d * w).sum();
            out[n] = scale * s;
        }
    }
    GridFunction::new(g.t_end(), out).expect("derivative of finite samples is finite")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerRuleKind {
    Integral,
    Caputo,
}

/// Closed form of `I^α` or `D^α` applied to τ^{β−1}, evaluated at τ.
pub fn exact_power_rule(kind: PowerRuleKind, alpha: f64, beta: f64, tau: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !(beta > 0.0) || !(tau > 0.0) {
        return Err(Error::domain(format!(
            "power rule needs alpha >= 0, beta > 0, tau > 0 (got {alpha}, {beta}, {tau})"
        )));
    }
    match kind {
        PowerRuleKind::Integral => Ok(gamma_pos(beta) / gamma_pos(beta + alpha) * tau.powf(alpha + beta - 1.0)),
        PowerRuleKind::Caputo => {
            if beta == 1.0 {
                return Ok(0.0);
            }
            if alpha == 0.0 {
                return Ok(tau.powf(beta - 1.0));
            }
            if !(beta - alpha > 0.0) {
                return Err(Error::domain(format!(
                    "Caputo power rule needs beta > alpha or beta = 1 (alpha = {alpha}, beta = {beta})"
                )));
            }
            Ok(gamma_pos(beta) / gamma_pos(beta - alpha) * tau.powf(beta - alpha - 1.0))
        }
    }
}

/// Max-norm of `I^β(I^α g) − I^{α+β} g` over the grid.
///
/// Composite orders above 1 are realised as `I^{α+β−1}` applied to `I¹ g`.
pub fn semigroup_residual(g: &GridFunction, alpha: FractionalOrder, beta: FractionalOrder) -> Result<f64> {
    let nested = rl_integral(&rl_integral(g, alpha), beta);
    let total = alpha.value() + beta.value();
    let direct = if total <= 1.0 {
        rl_integral_order(g, total)
    } else {
        rl_integral_order(&g.cumulative_integral(), total - 1.0)
    };
    nested.max_abs_diff(&direct)
}

/// Max-norm of `D^β g − I^{α−β}(D^α g)` for 0 < β ≤ α < 1.
pub fn caputo_composition_residual(g: &GridFunction, alpha: FractionalOrder, beta: FractionalOrder) -> Result<f64> {
    let (a, b) = (alpha.value(), beta.value());
    if !(b <= a && a < 1.0) {
        return Err(Error::domain(format!(
            "composition needs 0 < beta <= alpha < 1 (alpha = {a}, beta = {b})"
        )));
    }
    let lhs = caputo_derivative(g, beta);
    let d_alpha = caputo_derivative(g, alpha);
    let rhs = if a == b {
        d_alpha
    } else {
        rl_integral(&d_alpha, FractionalOrder::new(a - b)?)
    };
    lhs.max_abs_diff(&rhs)
}
