//! A-priori bounds from Bihari/Gronwall-type integral inequalities.
//!
//! Each bound takes the inequality data (constants, a sampled g or h,
//! comparison functions) and return the bound at one τ:
//!
//! * [`bihari_bound`]: `z ≤ c₁ + c₂τ^γ + c₃τ^γ ∫₀^τ g φ(z)`;
//! * [`linear_class_bound`]: `z ≤ c₁τ^γ + c₂τ^γ ∫₀^τ [F₁(s, z+c₃) + F₂(s, z+c₄) + h]`;
//! * [`lq_bihari_bound`]: `z ≤ K₁ + K₂ (∫₀^τ h^q φ₁^q(z) φ₂^q(z))^{1/q}`;
//! * [`convolution_holder_constant`]: the Beta-type constant of the Hölder
//!   estimate for `∫₀^τ (τ−s)^{υ−1} s^λ g(s) ds`.
//!
//! The problem-level envelopes in [`envelopes`] assemble these into growth
//! and boundedness statements about solutions.

pub mod envelopes;
mod mclass;
mod phi;

use std::collections::BTreeMap;
use std::fmt;

pub use envelopes::{fractional_source_envelope, kernel_holder_gain, power_growth_envelope, uniform_bound};
pub use mclass::MClassFunction;
pub(crate) use phi::advance;
pub use phi::{e_inverse, e_transform, BoundValue, PhiFunction, DEFAULT_XI0};

use crate::fracops::{ln_gamma, GridFunction};
use crate::quad;
use crate::{Error, Result};

/// Which construction produced a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSource {
    /// Two-branch growth envelope for the sequential problem with a
    /// φ(|x|)P(τ) source.
    PowerGrowth,
    /// |b₁| + Cτ^α envelope for the sequential problem with class-M sources.
    FractionalSource,
    /// Uniform bound for the direct problem with a product source.
    Uniform,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::PowerGrowth => "power_growth",
            BoundSource::FractionalSource => "fractional_source",
            BoundSource::Uniform => "uniform",
        })
    }
}

/// Shape of a bound on |x(τ)|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// c₁ for τ < 1, c₂τ^α for τ ≥ 1.
    TwoBranch { c1: f64, c2: f64, alpha: f64 },
    /// offset + coefficient·τ^α.
    PowerOffset { offset: f64, coefficient: f64, alpha: f64 },
    /// A uniform bound; +∞ when the underlying inverse blew up.
    Constant { value: f64 },
}

impl Envelope {
    pub fn eval(&self, tau: f64) -> f64 {
        match *self {
            Envelope::TwoBranch { c1, c2, alpha } => {
                if tau < 1.0 {
                    c1
                } else {
                    c2 * tau.powf(alpha)
                }
            }
            Envelope::PowerOffset {
                offset,
                coefficient,
                alpha,
            } => offset + coefficient * tau.powf(alpha),
            Envelope::Constant { value } => value,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub source: BoundSource,
    pub constants: BTreeMap<String, f64>,
    pub envelope: Envelope,
}

impl BoundReport {
    /// The envelope at every node of `grid` (may contain +∞).
    pub fn curve(&self, grid: &GridFunction) -> Vec<f64> {
        grid.taus().map(|t| self.envelope.eval(t)).collect()
    }

    /// max over nodes of |x|/envelope; for the fractional-source envelope
    /// τ^β|D^β x| is included as well. Values ≤ 1 mean the trajectory lies
    /// inside the envelope.
    pub fn envelope_ratio(&self, sol: &crate::fde_solvers::Solution) -> f64 {
        let beta = sol.spec.beta();
        let mut worst: f64 = 0.0;
        for (j, tau) in sol.x.taus().enumerate() {
            let bound = self.envelope.eval(tau);
            let mut measured = sol.x.values()[j].abs();
            if self.source == BoundSource::FractionalSource && tau > 0.0 {
                measured = measured.max(tau.powf(beta) * sol.dbeta_x.values()[j].abs());
            }
            let ratio = if bound > 0.0 {
                measured / bound
            } else if measured == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            worst = worst.max(ratio);
        }
        worst
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }
}

fn check_nonnegative(g: &GridFunction, what: &str) -> Result<()> {
    if g.min_value() < 0.0 {
        Err(Error::domain(format!("{what} must be non-negative")))
    } else {
        Ok(())
    }
}

fn check_tau(g: &GridFunction, tau: f64) -> Result<()> {
    if !(tau >= 0.0) || tau > g.t_end() * (1.0 + 1e-12) {
        Err(Error::domain(format!("tau = {tau} outside [0, {}]", g.t_end())))
    } else {
        Ok(())
    }
}

/// Two-branch Bihari bound for
/// `z(τ) ≤ c₁ + c₂τ^γ + c₃τ^γ ∫₀^τ g(s) φ(z(s)) ds` with γ ≥ 0, φ ∈ Φ:
///
/// * τ < 1: `E⁻¹(E(|c₁|+|c₂|) + |c₃|∫₀^τ g)`;
/// * τ ≥ 1: `τ^γ E⁻¹(E(A) + |c₃|∫₁^τ s^γ g)` with
///   `C = E(|c₁|+|c₂|) + |c₃|∫₀¹ g` and `A = |c₁|+|c₂| + |c₃|φ(E⁻¹(C))∫₀¹ g`.
///
/// g is the piecewise-linear interpolant of the samples; its integrals are exact.
pub fn bihari_bound(
    c1: f64,
    c2: f64,
    c3: f64,
    gamma: f64,
    g: &GridFunction,
    phi: &PhiFunction,
    tau: f64,
) -> Result<BoundValue> {
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    check_nonnegative(g, "g")?;
    check_tau(g, tau)?;
    let start = c1.abs() + c2.abs();
    if tau < 1.0 {
        return advance(phi, start, c3.abs() * g.integral(0.0, tau)?);
    }
    let g01 = g.integral(0.0, 1.0)?;
    let a = match advance(phi, start, c3.abs() * g01)? {
        BoundValue::Finite(c_inv) => start + c3.abs() * phi.eval(c_inv) * g01,
        BoundValue::BlowUp => return Ok(BoundValue::BlowUp),
    };
    let tail = c3.abs() * g.weighted_integral(gamma, 1.0, tau.min(g.t_end()))?;
    Ok(advance(phi, a, tail)?.map(|w| tau.powf(gamma) * w))
}

/// Linear class-M bound `τ^γ f(τ)` with
/// `f(τ) = (c₁ + c₂∫₀^τ[F₁(s,c₃) + F₂(s,c₄) + h(s)]ds)·exp(c₂∫₀^τ s^γ[N₁ + N₂]ds)`.
pub fn linear_class_bound(
    c: [f64; 4],
    gamma: f64,
    f1: &MClassFunction,
    f2: &MClassFunction,
    h: &GridFunction,
    tau: f64,
) -> Result<f64> {
    if c.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(Error::domain(format!("constants must be non-negative, got {c:?}")));
    }
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
    }
    check_nonnegative(h, "h")?;
    check_tau(h, tau)?;
    let [c1, c2, c3, c4] = c;
    if tau == 0.0 {
        return Ok(if gamma == 0.0 { c1 } else { 0.0 });
    }
    let sources = quad::integrate_default(|s| f1.eval(s, c3) + f2.eval(s, c4), 0.0, tau)?;
    let lipschitz = quad::integrate_default(|s| s.powf(gamma) * (f1.majorant(s) + f2.majorant(s)), 0.0, tau)?;
    let linear = c1 + c2 * (sources + h.integral(0.0, tau.min(h.t_end()))?);
    Ok(tau.powf(gamma) * linear * (c2 * lipschitz).exp())
}

/// K_{a,b} = Γ(b+1)Γ(a)/Γ(a+b+1) = B(a, b+1), for a > 0, b > −1.
pub fn beta_type_constant(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > -1.0) {
        return Err(Error::domain(format!("K_(a,b) needs a > 0, b > -1 (got {a}, {b})")));
    }
    Ok((ln_gamma(b + 1.0)? + ln_gamma(a)? - ln_gamma(a + b + 1.0)?).exp())
}

/// C = Γ(pλ+1)Γ(p(υ−1)+1)/Γ(pλ+p(υ−1)+2) with p = r/(r−1), for υ > 1/r,
/// λ+1 > 1/r, r > 1.
///
/// The Hölder estimate
/// `∫₀^τ (τ−s)^{υ−1}s^λ g ≤ C' τ^{υ+λ−1/r} (∫₀^τ g^r)^{1/r}` holds with
/// `C' = C^{1/p}` ([`holder_convolution_factor`]); C itself can be smaller
/// than the left-hand side (g ≡ 1, υ = λ = 1, r = 2 gives τ²/2 against τ²/3).
pub fn convolution_holder_constant(upsilon: f64, lambda: f64, r: f64) -> Result<f64> {
    if !(r > 1.0) || !(upsilon > 1.0 / r) || !(lambda + 1.0 > 1.0 / r) {
        return Err(Error::domain(format!(
            "need r > 1, upsilon > 1/r and lambda + 1 > 1/r (got {upsilon}, {lambda}, {r})"
        )));
    }
    let p = r / (r - 1.0);
    beta_type_constant(p * (upsilon - 1.0) + 1.0, p * lambda)
}

/// C^{1/p}, the factor for which the Hölder convolution estimate holds.
pub fn holder_convolution_factor(upsilon: f64, lambda: f64, r: f64) -> Result<f64> {
    let p = r / (r - 1.0);
    Ok(convolution_holder_constant(upsilon, lambda, r)?.powf(1.0 / p))
}

/// Form of the L_q Bihari bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LqVariant {
    /// `[E⁻¹(E(2^{q−1}K₁) + 2^{q−1}K₂∫h^q)]^{1/q}`.
    Literal,
    /// `[E⁻¹(E(2^{q−1}K₁^q) + 2^{q−1}K₂^q∫h^q)]^{1/q}`, which follows from
    /// raising the inequality to the power q.
    #[default]
    Corrected,
}

impl LqVariant {
    fn start_and_gain(self, k1: f64, k2: f64, q: f64) -> (f64, f64) {
        let two = 2f64.powf(q - 1.0);
        match self {
            LqVariant::Literal => (two * k1, two * k2),
            LqVariant::Corrected => (two * k1.powf(q), two * k2.powf(q)),
        }
    }
}

pub(crate) fn lq_bound_from_integral(
    k1: f64,
    k2: f64,
    q: f64,
    hq_integral: f64,
    psi: &PhiFunction,
    variant: LqVariant,
) -> Result<BoundValue> {
    let (start, gain) = variant.start_and_gain(k1, k2, q);
    Ok(advance(psi, start, gain * hq_integral)?.map(|w| w.powf(1.0 / q)))
}

/// L_q Bihari bound for `z ≤ K₁ + K₂(∫₀^τ h^q φ₁^q(z) φ₂^q(z))^{1/q}`, with
/// E built from ψ(s) = φ₁^q(s^{1/q})φ₂^q(s^{1/q}).
#[allow(clippy::too_many_arguments)]
pub fn lq_bihari_bound(
    k1: f64,
    k2: f64,
    q: f64,
    h: &GridFunction,
    phi1: &PhiFunction,
    phi2: &PhiFunction,
    tau: f64,
    variant: LqVariant,
) -> Result<BoundValue> {
    if !(k1 >= 0.0) || !(k2 >= 0.0) {
        return Err(Error::domain(format!("K1, K2 must be non-negative (got {k1}, {k2})")));
    }
    check_nonnegative(h, "h")?;
    check_tau(h, tau)?;
    let psi = PhiFunction::lq_composite(phi1, phi2, q)?;
    let hq = h.power_integral(q, 0.0, tau.min(h.t_end()))?;
    lq_bound_from_integral(k1, k2, q, hq, &psi, variant)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bihari_trivial_and_gronwall() {
        let id = PhiFunction::identity();
        let zero = GridFunction::zeros(2.0, 64).unwrap();
        assert_eq!(
            bihari_bound(1.3, 0.0, 1.0, 0.0, &zero, &id, 0.5).unwrap(),
            BoundValue::Finite(1.3)
        );

        let one = GridFunction::constant(2.0, 64, 1.0).unwrap();
        let b = bihari_bound(1.0, 0.0, 1.0, 0.0, &one, &id, 0.5).unwrap().value();
        assert!((b - 0.5f64.exp()).abs() < 1e-9, "{b}");
        assert!((b - 1.648_721_270_700_128).abs() < 1e-9);
    }

    #[test]
    fn bihari_second_branch_gronwall() {
        // γ = 0, φ = s: A = 1 + e·1 on the unit interval, then
        // E⁻¹(E(A) + (τ−1)) = A e^{τ−1}.
        let id = PhiFunction::identity();
        let one = GridFunction::constant(3.0, 60, 1.0).unwrap();
        let b = bihari_bound(1.0, 0.0, 1.0, 0.0, &one, &id, 2.0).unwrap().value();
        let a = 1.0 + std::f64::consts::E;
        assert!((b - a * 1f64.exp()).abs() < 1e-8 * b);
    }

    #[test]
    fn linear_class_closed_forms() {
        let z = MClassFunction::zero();
        let h0 = GridFunction::zeros(2.0, 16).unwrap();
        let b = linear_class_bound([2.0, 1.0, 1.0, 1.0], 0.5, &z, &z, &h0, 1.5).unwrap();
        assert!((b - 2.0 * 1.5f64.sqrt()).abs() < 1e-14);

        let f1 = MClassFunction::linear_exp(1.0, 1.0).unwrap();
        let b = linear_class_bound([1.0, 1.0, 1.0, 1.0], 0.0, &f1, &z, &h0, 1.0).unwrap();
        let i = 1.0 - (-1f64).exp();
        let want = (1.0 + i) * i.exp();
        assert!((b - want).abs() < 1e-10 * want);
    }

    #[test]
    fn holder_constants() {
        assert!((convolution_holder_constant(1.0, 0.0, 3.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((convolution_holder_constant(1.0, 1.0, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((holder_convolution_factor(1.0, 1.0, 2.0).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-14);
        assert!(convolution_holder_constant(0.4, 0.0, 2.0).is_err());
        assert!(convolution_holder_constant(1.0, -0.6, 2.0).is_err());
        assert!(convolution_holder_constant(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn printed_holder_constant_is_too_small() {
        // g ≡ 1, υ = λ = 1, r = 2 on [0, 1]: ∫₀¹ s ds = 1/2 > C = 1/3, while
        // C^{1/2} = 0.577 holds.
        let lhs = 0.5;
        assert!(lhs > convolution_holder_constant(1.0, 1.0, 2.0).unwrap());
        assert!(lhs <= holder_convolution_factor(1.0, 1.0, 2.0).unwrap());
    }

    #[test]
    fn lq_closed_forms() {
        let phi = PhiFunction::power(0.5).unwrap();
        let h0 = GridFunction::zeros(1.0, 8).unwrap();
        let b = lq_bihari_bound(1.5, 0.0, 3.0, &h0, &phi, &phi, 1.0, LqVariant::Literal).unwrap();
        assert_eq!(b.value(), (4.0f64 * 1.5).powf(1.0 / 3.0));

        // φ₁ = φ₂ ≡ 1, q = 2: (2K₁ + 2K₂∫h²)^{1/2}.
        let c = PhiFunction::constant(1.0).unwrap();
        let h = GridFunction::from_fn(1.0, 100, |t| 1.0 + t).unwrap();
        let (k1, k2) = (0.7, 1.3);
        let int_h2 = (8.0 - 1.0) / 3.0;
        let b = lq_bihari_bound(k1, k2, 2.0, &h, &c, &c, 1.0, LqVariant::Literal)
            .unwrap()
            .value();
        let want = (2.0 * k1 + 2.0 * k2 * int_h2).sqrt();
        assert!((b - want).abs() < 1e-9 * want, "{b} vs {want}");
        let b = lq_bihari_bound(k1, k2, 2.0, &h, &c, &c, 1.0, LqVariant::Corrected)
            .unwrap()
            .value();
        let want = (2.0 * k1 * k1 + 2.0 * k2 * k2 * int_h2).sqrt();
        assert!((b - want).abs() < 1e-9 * want);
    }

    #[test]
    fn envelope_shapes() {
        let e = Envelope::TwoBranch {
            c1: 2.0,
            c2: 3.0,
            alpha: 0.5,
        };
        assert_eq!(e.eval(0.5), 2.0);
        assert_eq!(e.eval(4.0), 6.0);
        let e = Envelope::PowerOffset {
            offset: 1.0,
            coefficient: 2.0,
            alpha: 0.5,
        };
        assert_eq!(e.eval(4.0), 5.0);
    }
}
