//! Ready-made right-hand sides f(τ, u, v).
//!
//! Fractional powers of u and v are taken as odd extensions,
//! `sign(u)·|u|^r`, so that every source is finite for all real arguments.

use crate::fracops::gamma_pos;
use crate::{Error, Result};

use super::RhsFunction;

/// sign(u)·|u|^r.
pub fn signed_pow(u: f64, r: f64) -> f64 {
    u.signum() * u.abs().powf(r)
}

/// f ≡ 0.
pub fn zero() -> RhsFunction {
    RhsFunction::new("zero_rhs", |_, _, _| 0.0)
}

/// f = e^{−τ} u^r (the v argument is ignored).
pub fn exp_sublinear(r: f64) -> Result<RhsFunction> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::domain(format!("exponent r must lie in (0, 1], got {r}")));
    }
    Ok(RhsFunction::new(format!("exp_sublinear(r={r})"), move |t, u, _| {
        (-t).exp() * signed_pow(u, r)
    }))
}

/// f = a·e^{−τ}·u (the v argument is ignored).
pub fn exp_linear(a: f64) -> Result<RhsFunction> {
    if !a.is_finite() {
        return Err(Error::domain("coefficient must be finite"));
    }
    Ok(RhsFunction::new(format!("exp_linear(a={a})"), move |t, u, _| {
        a * (-t).exp() * u
    }))
}

/// Parameters of the singular product source
/// `f = τ^{1/q−α} e^{−λτ} u^{r₁} φ₂(v) cos(v)` with `φ₂(v) = v^{r₂}` when
/// `shift = 0` and `φ₂(v) = (shift + |v|)^{r₂}` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularProduct {
    pub alpha: f64,
    pub q: f64,
    pub lambda: f64,
    pub r1: f64,
    pub r2: f64,
    pub shift: f64,
}

impl SingularProduct {
    /// Exponent of the τ prefactor.
    pub fn time_exponent(&self) -> f64 {
        1.0 / self.q - self.alpha
    }
}

pub fn singular_product(p: SingularProduct) -> Result<RhsFunction> {
    if !(p.q > 1.0) || !(p.lambda > 0.0) || !(p.r1 > 0.0) || !(p.r2 > 0.0) || !(p.shift >= 0.0) {
        return Err(Error::domain(format!(
            "singular product needs q > 1, lambda > 0, r1, r2 > 0, shift >= 0 (got {p:?})"
        )));
    }
    let gamma = p.time_exponent();
    if !(gamma > -1.0) {
        return Err(Error::domain(format!("time exponent {gamma} is not integrable at 0")));
    }
    let name = format!(
        "singular_product(alpha={}, q={}, lambda={}, r1={}, r2={}, shift={})",
        p.alpha, p.q, p.lambda, p.r1, p.r2, p.shift
    );
    let f = move |t: f64, u: f64, v: f64| {
        let phi2 = if p.shift == 0.0 {
            signed_pow(v, p.r2)
        } else {
            (p.shift + v.abs()).powf(p.r2)
        };
        t.powf(gamma) * (-p.lambda * t).exp() * signed_pow(u, p.r1) * phi2 * v.cos()
    };
    Ok(RhsFunction::new(name, f).singular_at_origin(gamma < 0.0))
}

/// The bounded counterpart `f = e^{−λτ} u^{r₁} (shift + |v|)^{r₂} cos(v)`.
///
/// It obeys the same product growth estimate as [`singular_product`] with
/// h(τ) = τ^{α−1/q} e^{−λτ}, but has no singular prefactor, so the solution
/// is smooth at the origin and the corrector converges from the first step.
pub fn exp_product(lambda: f64, r1: f64, r2: f64, shift: f64) -> Result<RhsFunction> {
    if !(lambda > 0.0) || !(r1 > 0.0) || !(r2 > 0.0) || !(shift >= 0.0) {
        return Err(Error::domain(format!(
            "exp product needs lambda > 0, r1, r2 > 0, shift >= 0 (got {lambda}, {r1}, {r2}, {shift})"
        )));
    }
    let name = format!("exp_product(lambda={lambda}, r1={r1}, r2={r2}, shift={shift})");
    Ok(RhsFunction::new(name, move |t, u, v| {
        (-lambda * t).exp() * signed_pow(u, r1) * (shift + v.abs()).powf(r2) * v.cos()
    }))
}

/// Source for the direct problem whose solution with x(0) = 0 is τ^μ:
/// f = Γ(μ+1)/Γ(μ+1−α)·τ^{μ−α}.
pub fn manufactured_power_direct(alpha: f64, mu: f64) -> Result<RhsFunction> {
    if !(mu > 0.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "need mu > 0 and 0 < alpha < 1 (mu = {mu}, alpha = {alpha})"
        )));
    }
    let c = gamma_pos(mu + 1.0) / gamma_pos(mu + 1.0 - alpha);
    let e = mu - alpha;
    Ok(
        RhsFunction::new(format!("manufactured_power(mu={mu})"), move |t, _, _| c * t.powf(e))
            .singular_at_origin(e < 0.0),
    )
}

/// Source for the sequential problem whose solution with x(0) = 0 and
/// D^α x(0) = 0 is τ^μ: f = (D^α τ^μ)' = Γ(μ+1)/Γ(μ−α)·τ^{μ−α−1}, μ > α.
pub fn manufactured_power_sequential(alpha: f64, mu: f64) -> Result<RhsFunction> {
    if !(mu > alpha) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "need mu > alpha and 0 < alpha < 1 (mu = {mu}, alpha = {alpha})"
        )));
    }
    let c = gamma_pos(mu + 1.0) / gamma_pos(mu - alpha);
    let e = mu - alpha - 1.0;
    Ok(
        RhsFunction::new(format!("manufactured_power(mu={mu})"), move |t, _, _| c * t.powf(e))
            .singular_at_origin(e < 0.0),
    )
}
