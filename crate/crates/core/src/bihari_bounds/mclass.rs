use std::fmt;
use std::sync::Arc;

use crate::asymptotics::{Integrand, TailClass};
use crate::{Error, Result};

type PairFn = dyn Fn(f64, f64) -> f64 + Send + Sync;
type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// F(τ, s) ≥ 0 with F(τ, 0) = 0 and a one-sided Lipschitz majorant N:
/// 0 ≤ F(τ, s) − F(τ, r) ≤ N(τ)(s − r) for s ≥ r ≥ 0.
///
/// Because F(τ, 0) = 0, every section F(·, u) is dominated by u·N, so the
/// tail class declared for N covers the sections as well.
#[derive(Clone)]
pub struct MClassFunction {
    name: String,
    f: Arc<PairFn>,
    majorant: Arc<ScalarFn>,
    tail: TailClass,
}

impl MClassFunction {
    pub fn new(
        name: impl Into<String>,
        tail: TailClass,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        majorant: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        MClassFunction {
            name: name.into(),
            f: Arc::new(f),
            majorant: Arc::new(majorant),
            tail,
        }
    }

    pub fn zero() -> Self {
        MClassFunction::new(
            "0",
            TailClass::Exponential {
                rate: 1.0,
                coefficient: 0.0,
            },
            |_, _| 0.0,
            |_| 0.0,
        )
    }

    fn exp_family(
        label: &str,
        a: f64,
        lambda: f64,
        shape: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(a >= 0.0) || !(lambda > 0.0) {
            return Err(Error::domain(format!("need a >= 0 and lambda > 0 (got {a}, {lambda})")));
        }
        Ok(MClassFunction::new(
            format!("{a}*exp(-{lambda}*t)*{label}"),
            TailClass::Exponential {
                rate: lambda,
                coefficient: a,
            },
            move |t, s| a * (-lambda * t).exp() * shape(s),
            move |t| a * (-lambda * t).exp(),
        ))
    }

    /// F = a·e^{−λτ}·s.
    pub fn linear_exp(a: f64, lambda: f64) -> Result<Self> {
        Self::exp_family("s", a, lambda, |s| s)
    }

    /// F = a·e^{−λτ}·ln(1 + s).
    pub fn log_exp(a: f64, lambda: f64) -> Result<Self> {
        Self::exp_family("ln(1+s)", a, lambda, f64::ln_1p)
    }

    /// F = a·e^{−λτ}·s/(1 + s).
    pub fn rational_exp(a: f64, lambda: f64) -> Result<Self> {
        Self::exp_family("s/(1+s)", a, lambda, |s| s / (1.0 + s))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tail(&self) -> TailClass {
        self.tail
    }

    pub fn eval(&self, tau: f64, s: f64) -> f64 {
        (self.f)(tau, s)
    }

    pub fn majorant(&self, tau: f64) -> f64 {
        (self.majorant)(tau)
    }

    /// τ ↦ F(τ, u).
    pub fn section(&self, u: f64) -> Integrand {
        let f = Arc::clone(&self.f);
        Integrand::new(format!("{}|s={u}", self.name), self.tail.scaled(u), move |t| f(t, u))
    }

    /// τ ↦ N(τ).
    pub fn majorant_integrand(&self) -> Integrand {
        let n = Arc::clone(&self.majorant);
        Integrand::new(format!("N[{}]", self.name), self.tail, move |t| n(t))
    }

    /// Sampled membership test on a lattice × lattice grid of τ ∈ [1e-3, 1e3]
    /// (log spaced) and s, r ∈ [0, 100].
    pub fn check_class(&self, lattice: usize) -> Result<()> {
        let n = lattice.max(2);
        let tau_at = |k: usize| 1e-3 * 1e6f64.powf(k as f64 / (n - 1) as f64);
        let s_at = |k: usize| 100.0 * (k as f64 / (n - 1) as f64).powi(2);
        for i in 0..n {
            let tau = tau_at(i);
            let bound = self.majorant(tau);
            if !(bound >= 0.0) || !bound.is_finite() {
                return Err(Error::ClassViolation(format!("{}: N({tau}) = {bound}", self.name)));
            }
            if self.eval(tau, 0.0) != 0.0 {
                return Err(Error::ClassViolation(format!("{}: F({tau}, 0) != 0", self.name)));
            }
            for j in 1..n {
                let (r, s) = (s_at(j - 1), s_at(j));
                let d = self.eval(tau, s) - self.eval(tau, r);
                let slack = 1e-12 * (self.eval(tau, s).abs() + bound * (s - r)) + 1e-300;
                if d < -slack || d > bound * (s - r) + slack {
                    return Err(Error::ClassViolation(format!(
                        "{}: increment {d} outside [0, N(τ)(s−r)] at τ = {tau}, r = {r}, s = {s}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MClassFunction")
            .field("name", &self.name)
            .field("tail", &self.tail)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_in_class() {
        for f in [
            MClassFunction::zero(),
            MClassFunction::linear_exp(2.0, 0.5).unwrap(),
            MClassFunction::log_exp(1.0, 1.0).unwrap(),
            MClassFunction::rational_exp(3.0, 2.0).unwrap(),
        ] {
            f.check_class(64).unwrap();
        }
    }

    #[test]
    fn superlinear_is_rejected() {
        let sq = MClassFunction::new("s^2", TailClass::Unknown, |_, s| s * s, |_| 1.0);
        assert!(matches!(sq.check_class(32), Err(Error::ClassViolation(_))));
        let dec = MClassFunction::new("-s", TailClass::Unknown, |_, s| -s, |_| 1.0);
        assert!(dec.check_class(8).is_err());
    }
}
