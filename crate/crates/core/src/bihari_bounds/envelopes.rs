//! Problem-level envelopes built from the inequality bounds.
//!
//! * [`power_growth_envelope`]: sequential problem with |f| ≤ φ(|x|)P(τ):
//!   |x| ≤ C₁ on [0, 1) and C₂τ^α beyond.
//! * [`fractional_source_envelope`]: sequential problem with
//!   |f| ≤ F₁(τ, |x|) + F₂(τ, τ^β|D^β x|): |x|, τ^β|D^β x| ≤ |b₁| + Cτ^α.
//! * [`uniform_bound`]: direct problem with
//!   |f| ≤ τ^γ h(τ) φ₁(|x|) φ₂(|D^β x|), γ = 1/q − α: |x|, |D^β x| ≤ C.
//!
//! Every hypothesis that can be checked numerically is checked; a failed
//! check is reported as [`Error::HypothesisViolation`].

use std::collections::BTreeMap;

use crate::asymptotics::{improper_tail, Integrand, Verdict};
use crate::fde_solvers::{ProblemKind, ProblemSpec};
use crate::fracops::gamma_pos;
use crate::quad;
use crate::{Error, Result};

use super::{
    advance, beta_type_constant, lq_bound_from_integral, BoundReport, BoundSource, BoundValue, Envelope, LqVariant,
    MClassFunction, PhiFunction,
};

fn require_converges(what: &str, f: &Integrand, weight: f64, split: f64) -> Result<f64> {
    let (value, verdict) = improper_tail(f, weight, split)?;
    match verdict {
        Verdict::Converges => Ok(value),
        other => Err(Error::HypothesisViolation(format!(
            "{what}: ∫ from {split} to ∞ of s^{weight}·{} is {other}",
            f.name()
        ))),
    }
}

fn finite(v: BoundValue) -> f64 {
    v.value()
}

/// Growth envelope for `(D^α x)' = f` with `|f(τ, x)| ≤ φ(|x|)P(τ)`.
///
/// Requires ∫₁^∞ s^α P < ∞, φ ∈ Φ (sampled) and ∫^∞ ds/φ = ∞ so that E⁻¹ is
/// defined on [0, ∞). With g = 1/Γ(α+1) and k = |b₁| + |b₂|g:
/// `K = E(k) + g∫₀¹P`, `C₁ = E⁻¹(K)`, `A = k + gφ(C₁)∫₀¹P`,
/// `C₂ = E⁻¹(E(A) + g∫₁^∞ s^α P)`.
pub fn power_growth_envelope(b1: f64, b2: f64, alpha: f64, p: &Integrand, phi: &PhiFunction) -> Result<BoundReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    phi.check_class(64)?;
    if phi.divergence_verdict()? != Verdict::Diverges {
        return Err(Error::HypothesisViolation(format!(
            "∫ ds/φ is not shown to diverge for φ = {}",
            phi.name()
        )));
    }
    let tail = require_converges("P", p, alpha, 1.0)?;
    let g = 1.0 / gamma_pos(alpha + 1.0);
    let k = b1.abs() + b2.abs() * g;
    let p01 = quad::integrate_default(|s| p.eval(s), 0.0, 1.0)?;
    let c1 = finite(advance(phi, k, g * p01)?);
    let a = k + g * phi.eval(c1) * p01;
    let c2 = finite(advance(phi, a, g * tail)?);

    let mut constants = BTreeMap::new();
    constants.insert("C1".to_string(), c1);
    constants.insert("C2".to_string(), c2);
    constants.insert("A".to_string(), a);
    constants.insert("P_unit_integral".to_string(), p01);
    constants.insert("P_weighted_tail".to_string(), tail);
    Ok(BoundReport {
        source: BoundSource::PowerGrowth,
        constants,
        envelope: Envelope::TwoBranch { c1, c2, alpha },
    })
}

/// Envelope `|b₁| + Cτ^α` for `(D^α x)' = f` with
/// `|f| ≤ F₁(τ, |x|) + F₂(τ, τ^β|D^β x|)`, F₁, F₂ ∈ M.
///
/// `C₃ = max{1/Γ(α+1), 1/Γ(α−β+1)}`, `C₂ = |b₂|C₃` and
/// `C = (C₂ + C₃∫₀^∞[F₁(s,|b₁|) + F₂(s,|b₁|)])·exp(C₃∫₀^∞ s^α[N₁ + N₂])`.
pub fn fractional_source_envelope(
    b1: f64,
    b2: f64,
    alpha: f64,
    beta: f64,
    f1: &MClassFunction,
    f2: &MClassFunction,
) -> Result<BoundReport> {
    if !(0.0 < beta && beta < alpha && alpha < 1.0) {
        return Err(Error::domain(format!(
            "need 0 < beta < alpha < 1 (alpha = {alpha}, beta = {beta})"
        )));
    }
    f1.check_class(64)?;
    f2.check_class(64)?;
    let u = b1.abs();
    let s1 = require_converges("F1(s, |b1|)", &f1.section(u), 0.0, 0.0)?;
    let s2 = require_converges("F2(s, |b1|)", &f2.section(u), 0.0, 0.0)?;
    let n1 = require_converges("N1", &f1.majorant_integrand(), alpha, 0.0)?;
    let n2 = require_converges("N2", &f2.majorant_integrand(), alpha, 0.0)?;
    let c3 = (1.0 / gamma_pos(alpha + 1.0)).max(1.0 / gamma_pos(alpha - beta + 1.0));
    let c2 = b2.abs() * c3;
    let c = (c2 + c3 * (s1 + s2)) * (c3 * (n1 + n2)).exp();

    let mut constants = BTreeMap::new();
    constants.insert("C".to_string(), c);
    constants.insert("C2".to_string(), c2);
    constants.insert("C3".to_string(), c3);
    constants.insert("source_integral".to_string(), s1 + s2);
    constants.insert("majorant_integral".to_string(), n1 + n2);
    Ok(BoundReport {
        source: BoundSource::FractionalSource,
        constants,
        envelope: Envelope::PowerOffset {
            offset: u,
            coefficient: c,
            alpha,
        },
    })
}

/// K₁ = max{K_{1+p(α−1), pγ}^{1/p}/Γ(α), K_{1+p(α−β−1), pγ}^{1/p}/(Γ(α−β)τ₀^β)}
/// with p = q/(q−1), γ = 1/q − α and K_{a,b} = Γ(b+1)Γ(a)/Γ(a+b+1).
///
/// Requires q > 1/(α−β), which makes both K arguments admissible.
pub fn kernel_holder_gain(alpha: f64, beta: f64, q: f64, tau0: f64) -> Result<f64> {
    if !(0.0 <= beta && beta < alpha && alpha < 1.0) {
        return Err(Error::domain(format!(
            "need 0 <= beta < alpha < 1 (alpha = {alpha}, beta = {beta})"
        )));
    }
    if !(q > 1.0 / (alpha - beta)) {
        return Err(Error::domain(format!(
            "q = {q} must exceed 1/(alpha - beta) = {}",
            1.0 / (alpha - beta)
        )));
    }
    if !(tau0 > 0.0) || !tau0.is_finite() {
        return Err(Error::domain(format!("tau0 must be positive, got {tau0}")));
    }
    let p = q / (q - 1.0);
    let pg = p * (1.0 / q - alpha);
    let first = beta_type_constant(1.0 + p * (alpha - 1.0), pg)?.powf(1.0 / p) / gamma_pos(alpha);
    let second = beta_type_constant(1.0 + p * (alpha - beta - 1.0), pg)?.powf(1.0 / p)
        / (gamma_pos(alpha - beta) * tau0.powf(beta));
    Ok(first.max(second))
}

/// Uniform bound C for the direct problem with
/// `|f(τ, u, v)| ≤ τ^{1/q−α} h(τ) φ₁(|u|) φ₂(|v|)`.
///
/// Hypotheses checked: q > 1/(α−β); ∫₀^∞ h^q < ∞; ∫^∞ ds/ψ = ∞ for
/// ψ(s) = φ₁^q(s^{1/q})φ₂^q(s^{1/q}). The L_q Bihari bound is applied with
/// K₁ ↦ |b| and K₂ ↦ [`kernel_holder_gain`]. When ∫h^q = 0 the
/// representation gives C = |b| directly.
///
/// |x| ≤ C holds for all τ; |D^β x| ≤ C for τ ≥ τ₀.
pub fn uniform_bound(
    spec: &ProblemSpec,
    h: &Integrand,
    phi1: &PhiFunction,
    phi2: &PhiFunction,
    q: f64,
    tau0: f64,
    variant: LqVariant,
) -> Result<BoundReport> {
    if spec.kind() != ProblemKind::Direct {
        return Err(Error::domain("the uniform bound applies to the direct problem"));
    }
    let (alpha, beta) = (spec.alpha(), spec.beta());
    if !(q > 1.0 / (alpha - beta)) {
        return Err(Error::HypothesisViolation(format!(
            "q = {q} does not exceed 1/(alpha - beta) = {}",
            1.0 / (alpha - beta)
        )));
    }
    let psi = PhiFunction::lq_composite(phi1, phi2, q)?;
    let verdict = psi.divergence_verdict()?;
    if verdict != Verdict::Diverges {
        return Err(Error::HypothesisViolation(format!(
            "∫ ds/ψ {verdict} for ψ = {} (must diverge)",
            psi.name()
        )));
    }
    let hq = require_converges("h^q", &h.powf(q), 0.0, 0.0)?;
    let k1 = kernel_holder_gain(alpha, beta, q, tau0)?;
    let b = spec.b1().abs();
    let c = if hq == 0.0 {
        b
    } else {
        lq_bound_from_integral(b, k1, q, hq, &psi, variant)?.value()
    };

    let mut constants = BTreeMap::new();
    constants.insert("C".to_string(), c);
    constants.insert("K1".to_string(), k1);
    constants.insert("h_q_integral".to_string(), hq);
    constants.insert("q".to_string(), q);
    constants.insert("tau0".to_string(), tau0);
    Ok(BoundReport {
        source: BoundSource::Uniform,
        constants,
        envelope: Envelope::Constant { value: c },
    })
}
