//! Γ, ln Γ and B restricted to positive arguments, on top of `statrs`.
//!
//! Positive integers up to 171 go through an exact factorial product so that
//! Γ(n) is exactly (n−1)! wherever f64 can hold it.

use crate::{Error, Result};

fn gamma_unchecked(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 171.0 {
        return (2..x as u32).fold(1.0, |acc, k| acc * k as f64);
    }
    statrs::function::gamma::gamma(x)
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} is defined here for x > 0, got {x}")))
    }
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    Ok(gamma_unchecked(x))
}

/// ln Γ(x) for x > 0; stays finite where Γ itself overflows.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Γ at an argument the caller has already validated as positive.
pub(crate) fn gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0, "gamma_pos({x})");
    gamma_unchecked(x)
}

/// Euler beta function B(a, b) = Γ(a)Γ(b)/Γ(a+b), evaluated through ln Γ.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}
