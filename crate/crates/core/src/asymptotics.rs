//! Finite-horizon checks of limit statements.
//!
//! A limit cannot be certified from a finite run. What is measured instead:
//!
//! * [`power_slope`]: the ratio x(τ)/τ^α at the end of the run, its
//!   Aitken-accelerated limit over τ = T/4, T/2, T, and its spread over a
//!   trailing window;
//! * [`lhopital_residual`] / [`lhopital_limit_residual`]: agreement between
//!   x/τ^α and D^α x/Γ(1+α), at the final node and after acceleration;
//! * [`improper_tail`]: convergence of ∫_split^∞ s^w f(s) ds from a declared
//!   tail class plus horizon doubling;
//! * [`integrated_limit_check`]: τ^{−α} I^{α+1} f(τ) against ∫₀^∞ f/Γ(α+1);
//! * [`boundedness_verdict`]: sups of x and D^β x against a uniform bound.

use std::fmt;
use std::sync::Arc;

use crate::bihari_bounds::{BoundReport, Envelope};
use crate::fde_solvers::Solution;
use crate::fracops::{gamma_pos, rl_integral, FractionalOrder, GridFunction};
use crate::quad;
use crate::{Error, Result};

/// Declared behaviour of an integrand for large s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailClass {
    /// |f(s)| ≤ coefficient·e^{−rate·s} for all large s.
    Exponential {
        rate: f64,
        coefficient: f64,
    },
    /// f(s) ~ coefficient·s^{−exponent} for large s.
    Power {
        exponent: f64,
        coefficient: f64,
    },
    Unknown,
}

impl TailClass {
    /// Tail class of |f|^q.
    pub fn powf(self, q: f64) -> TailClass {
        match self {
            TailClass::Exponential { rate, coefficient } => TailClass::Exponential {
                rate: rate * q,
                coefficient: coefficient.abs().powf(q),
            },
            TailClass::Power { exponent, coefficient } => TailClass::Power {
                exponent: exponent * q,
                coefficient: coefficient.abs().powf(q),
            },
            TailClass::Unknown => TailClass::Unknown,
        }
    }

    /// Tail class of c·f.
    pub fn scaled(self, c: f64) -> TailClass {
        match self {
            TailClass::Exponential { rate, coefficient } => TailClass::Exponential {
                rate,
                coefficient: coefficient * c.abs(),
            },
            TailClass::Power { exponent, coefficient } => TailClass::Power {
                exponent,
                coefficient: coefficient * c.abs(),
            },
            TailClass::Unknown => TailClass::Unknown,
        }
    }
}

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A one-variable function on (0, ∞) together with its tail class.
#[derive(Clone)]
pub struct Integrand {
    name: String,
    f: Arc<ScalarFn>,
    tail: TailClass,
}

impl Integrand {
    pub fn new(name: impl Into<String>, tail: TailClass, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Integrand {
            name: name.into(),
            f: Arc::new(f),
            tail,
        }
    }

    pub fn zero() -> Self {
        Integrand::new(
            "0",
            TailClass::Exponential {
                rate: 1.0,
                coefficient: 0.0,
            },
            |_| 0.0,
        )
    }

    /// c·e^{−λs}.
    pub fn exp_decay(rate: f64, coefficient: f64) -> Result<Self> {
        if !(rate > 0.0) || !coefficient.is_finite() {
            return Err(Error::domain(format!("exp decay needs rate > 0 (got {rate})")));
        }
        Ok(Integrand::new(
            format!("{coefficient}*exp(-{rate}*s)"),
            TailClass::Exponential { rate, coefficient },
            move |s| coefficient * (-rate * s).exp(),
        ))
    }

    /// c·s^{−p}.
    pub fn power_decay(exponent: f64, coefficient: f64) -> Result<Self> {
        if !exponent.is_finite() || !coefficient.is_finite() {
            return Err(Error::domain("power decay parameters must be finite"));
        }
        Ok(Integrand::new(
            format!("{coefficient}*s^(-{exponent})"),
            TailClass::Power { exponent, coefficient },
            move |s| coefficient * s.powf(-exponent),
        ))
    }

    /// c·s^k·e^{−λs} with k ≥ 0; declared with exponential tail rate λ/2.
    pub fn power_exp(power: f64, rate: f64, coefficient: f64) -> Result<Self> {
        if !(rate > 0.0) || !(power >= 0.0) || !coefficient.is_finite() {
            return Err(Error::domain(format!(
                "power-exp needs rate > 0 and power >= 0 (got {rate}, {power})"
            )));
        }
        // s^k e^{−λs/2} peaks at s = 2k/λ.
        let peak = if power == 0.0 {
            1.0
        } else {
            (2.0 * power / rate).powf(power) * (-power).exp()
        };
        Ok(Integrand::new(
            format!("{coefficient}*s^{power}*exp(-{rate}*s)"),
            TailClass::Exponential {
                rate: 0.5 * rate,
                coefficient: coefficient.abs() * peak,
            },
            move |s| coefficient * s.powf(power) * (-rate * s).exp(),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tail(&self) -> TailClass {
        self.tail
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    /// |f|^q.
    pub fn powf(&self, q: f64) -> Integrand {
        let f = Arc::clone(&self.f);
        Integrand {
            name: format!("|{}|^{q}", self.name),
            f: Arc::new(move |s| f(s).abs().powf(q)),
            tail: self.tail.powf(q),
        }
    }
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("tail", &self.tail)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Converges => "converges",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

const TAIL_INCREMENT_TOL: f64 = 1e-10;
const MAX_DOUBLINGS: usize = 64;

/// ∫_split^∞ s^w f(s) ds.
///
/// Quadrature runs over [split, H] with H doubled until one doubling adds
/// less than 1e-10. Declared tails decide the verdict (exactly, for power
/// tails); the numeric increments can only downgrade a converging tag to
/// inconclusive. Untagged integrands are never declared convergent unless the
/// increments die out, and never declared divergent. The returned estimate
/// adds an analytic tail term for tagged integrands; for divergent verdicts
/// it is the partial integral up to the last horizon.
pub fn improper_tail(f: &Integrand, weight_power: f64, split: f64) -> Result<(f64, Verdict)> {
    if !(split >= 0.0) || !split.is_finite() || !weight_power.is_finite() {
        return Err(Error::domain(format!(
            "improper tail needs split >= 0 and a finite weight (got {split}, {weight_power})"
        )));
    }
    let g = |s: f64| s.powf(weight_power) * f.eval(s);
    let mut lo = split;
    let mut hi = if split < 1.0 { 1.0 } else { 2.0 * split };
    let mut total = quad::integrate_default(g, lo, hi)?;
    let mut increments = Vec::with_capacity(MAX_DOUBLINGS);
    let mut settled = false;
    for _ in 0..MAX_DOUBLINGS {
        lo = hi;
        hi *= 2.0;
        let inc = quad::integrate_default(g, lo, hi)?;
        if !inc.is_finite() {
            break;
        }
        total += inc;
        increments.push(inc.abs());
        if inc.abs() < TAIL_INCREMENT_TOL {
            settled = true;
            break;
        }
    }
    // Increments that are still growing contradict a converging tag.
    let growing = increments.len() >= 3 && {
        let k = increments.len();
        increments[k - 1] > increments[k - 2] && increments[k - 2] > increments[k - 3]
    };
    let w = weight_power;
    let (estimate, verdict) = match f.tail() {
        TailClass::Exponential { rate, coefficient } => {
            let tail = if rate > w.max(0.0) / hi {
                coefficient.abs() * hi.powf(w) * (-rate * hi).exp() / (rate - w.max(0.0) / hi)
            } else {
                f64::INFINITY
            };
            let verdict = if growing || !tail.is_finite() {
                Verdict::Inconclusive
            } else {
                Verdict::Converges
            };
            (total + if tail.is_finite() { tail } else { 0.0 }, verdict)
        }
        TailClass::Power { exponent, coefficient } => {
            let decay = exponent - w;
            if decay > 1.0 {
                let tail = coefficient * hi.powf(1.0 - decay) / (decay - 1.0);
                let verdict = if growing {
                    Verdict::Inconclusive
                } else {
                    Verdict::Converges
                };
                (total + tail, verdict)
            } else if coefficient == 0.0 {
                (total, Verdict::Converges)
            } else {
                (total, Verdict::Diverges)
            }
        }
        TailClass::Unknown => (
            total,
            if settled {
                Verdict::Converges
            } else {
                Verdict::Inconclusive
            },
        ),
    };
    Ok((estimate, verdict))
}

/// Ratio x(τ)/τ^α measured at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    /// x(T)/T^α.
    pub raw_tail: f64,
    /// Aitken Δ² limit of the ratio sampled at T/4, T/2, T.
    pub accelerated: f64,
    /// max − min of the ratio over the trailing window.
    pub spread: f64,
    pub window_fraction: f64,
}

impl SlopeEstimate {
    /// spread / |accelerated|.
    pub fn relative_spread(&self) -> f64 {
        self.spread / self.accelerated.abs()
    }
}

/// Aitken Δ² extrapolation of three terms of a geometrically converging
/// sequence; returns the last term when the second difference vanishes.
pub fn aitken(s0: f64, s1: f64, s2: f64) -> f64 {
    let d1 = s1 - s0;
    let d2 = s2 - s1;
    let denom = d2 - d1;
    let scale = s0.abs().max(s1.abs()).max(s2.abs()).max(f64::MIN_POSITIVE);
    if denom.abs() <= 1e-14 * scale {
        s2
    } else {
        s2 - d2 * d2 / denom
    }
}

fn ratio_at(x: &GridFunction, alpha: f64, tau: f64) -> Result<f64> {
    Ok(x.eval(tau)? / tau.powf(alpha))
}

/// [`power_slope`] on a bare grid function.
pub fn power_slope_grid(x: &GridFunction, alpha: f64, window_fraction: f64) -> Result<SlopeEstimate> {
    let t_end = x.t_end();
    if t_end < 10.0 {
        return Err(Error::domain(format!("slope estimation needs T >= 10, got {t_end}")));
    }
    if !(window_fraction > 0.0 && window_fraction <= 0.9) {
        return Err(Error::domain(format!(
            "window fraction must lie in (0, 0.9], got {window_fraction}"
        )));
    }
    let start = (1.0 - window_fraction) * t_end;
    let window: Vec<f64> = x
        .taus()
        .zip(x.values())
        .filter(|(t, _)| *t >= start && *t > 0.0)
        .map(|(t, v)| v / t.powf(alpha))
        .collect();
    if window.len() < 3 {
        return Err(Error::DegenerateWindow(format!(
            "{} nodes in [{start}, {t_end}]",
            window.len()
        )));
    }
    let max = window.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = window.iter().copied().fold(f64::INFINITY, f64::min);
    let s0 = ratio_at(x, alpha, 0.25 * t_end)?;
    let s1 = ratio_at(x, alpha, 0.5 * t_end)?;
    let s2 = ratio_at(x, alpha, t_end)?;
    Ok(SlopeEstimate {
        raw_tail: s2,
        accelerated: aitken(s0, s1, s2),
        spread: max - min,
        window_fraction,
    })
}

/// Estimates a = lim x(τ)/τ^α from a solution.
pub fn power_slope(sol: &Solution, window_fraction: f64) -> Result<SlopeEstimate> {
    power_slope_grid(&sol.x, sol.spec.alpha(), window_fraction)
}

/// |x(T)/T^α − D^α x(T)/Γ(1+α)| from grid histories.
pub fn lhopital_residual_grid(x: &GridFunction, dalpha_x: &GridFunction, alpha: f64) -> Result<f64> {
    if !x.same_grid(dalpha_x) {
        return Err(Error::InvalidGrid("x and D^α x live on different grids".into()));
    }
    let t_end = x.t_end();
    Ok((x.last() / t_end.powf(alpha) - dalpha_x.last() / gamma_pos(1.0 + alpha)).abs())
}

/// |x(T)/T^α − D^α x(T)/Γ(1+α)| at the final node.
///
/// For x = b₁ + (smooth part) the first term carries b₁/T^α, so at finite T
/// this residual is bounded below by roughly |b₁|/T^α.
pub fn lhopital_residual(sol: &Solution) -> Result<f64> {
    lhopital_residual_grid(&sol.x, &sol.dalpha_x, sol.spec.alpha())
}

/// Difference of the Aitken-accelerated limits of x/τ^α and D^α x/Γ(1+α),
/// both sampled at T/4, T/2, T.
pub fn lhopital_limit_residual(sol: &Solution) -> Result<f64> {
    let alpha = sol.spec.alpha();
    let t_end = sol.x.t_end();
    let ratio = |tau: f64| ratio_at(&sol.x, alpha, tau);
    let deriv = |tau: f64| -> Result<f64> { Ok(sol.dalpha_x.eval(tau)? / gamma_pos(1.0 + alpha)) };
    let a = aitken(ratio(0.25 * t_end)?, ratio(0.5 * t_end)?, ratio(t_end)?);
    let b = aitken(deriv(0.25 * t_end)?, deriv(0.5 * t_end)?, deriv(t_end)?);
    Ok((a - b).abs())
}

/// |τ^{−α} I^{α+1} f(τ) − total/Γ(α+1)| at each requested τ, where `total`
/// is ∫₀^∞ f. I^{α+1} is realised as I¹ ∘ I^α.
pub fn integrated_limit_check(
    fgrid: &GridFunction,
    alpha: FractionalOrder,
    taus: &[f64],
    total: f64,
) -> Result<Vec<f64>> {
    let a = alpha.value();
    let lifted = rl_integral(fgrid, alpha).cumulative_integral();
    let limit = total / gamma_pos(a + 1.0);
    taus.iter()
        .map(|&tau| {
            if !(tau > 0.0) {
                return Err(Error::domain(format!("tau must be positive, got {tau}")));
            }
            Ok((lifted.eval(tau)? / tau.powf(a) - limit).abs())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundedness {
    pub sup_x: f64,
    /// sup of |D^β x| over τ ≥ τ₀.
    pub sup_dbeta: f64,
    pub bound: f64,
    pub within_bound: bool,
}

/// Compares the sups of |x| and |D^β x| (the latter over τ ≥ τ₀) with a
/// uniform bound C, allowing a 1e-9 relative slack.
pub fn boundedness_verdict(sol: &Solution, bound: &BoundReport, tau0: f64) -> Result<Boundedness> {
    let c = match bound.envelope {
        Envelope::Constant { value } => value,
        _ => return Err(Error::domain("boundedness needs a uniform (constant) bound")),
    };
    Ok(boundedness_against(sol, c, tau0))
}

pub(crate) fn boundedness_against(sol: &Solution, c: f64, tau0: f64) -> Boundedness {
    let sup_x = sol.x.max_abs();
    let sup_dbeta = sol
        .dbeta_x
        .taus()
        .zip(sol.dbeta_x.values())
        .filter(|(t, _)| *t >= tau0)
        .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    let limit = c * (1.0 + 1e-9);
    Boundedness {
        sup_x,
        sup_dbeta,
        bound: c,
        within_bound: sup_x <= limit && sup_dbeta <= limit,
    }
}
