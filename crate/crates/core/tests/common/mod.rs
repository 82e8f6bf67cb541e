//! Brute-force extremal solutions of the integral inequalities and seeded
//! instance generators shared by the dominance suites and the acceptance run.
//!
//! Each oracle marches the inequality as an equality with the unknown frozen
//! at the left end of every cell. The resulting step function satisfies the
//! inequality at every τ (the right-hand sides are nondecreasing in τ), so
//! the closed-form bounds must dominate it.

#![allow(dead_code)]

use fracdyn::bihari_bounds::{MClassFunction, PhiFunction};
use fracdyn::fracops::GridFunction;
use fracdyn::quad;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// z_j = c₁ + c₂τ_j^γ + c₃τ_j^γ Σ_{i<j} φ(z_i) ∫_{cell i} g.
pub fn bihari_extremal(c1: f64, c2: f64, c3: f64, gamma: f64, g: &GridFunction, phi: &PhiFunction) -> Vec<f64> {
    let h = g.step();
    let v = g.values();
    let mut z = Vec::with_capacity(v.len());
    let mut acc = 0.0;
    for j in 0..v.len() {
        let tau = j as f64 * h;
        let tg = tau.powf(gamma);
        z.push(c1 + c2 * tg + c3 * tg * acc);
        if j + 1 < v.len() {
            acc += phi.eval(z[j]) * 0.5 * h * (v[j] + v[j + 1]);
        }
    }
    z
}

/// z_j = τ_j^γ [c₁ + c₂ Σ_{i<j} ∫_{cell i} (F₁(s, z_i + c₃) + F₂(s, z_i + c₄) + h)].
pub fn linear_class_extremal(
    c: [f64; 4],
    gamma: f64,
    f1: &MClassFunction,
    f2: &MClassFunction,
    hg: &GridFunction,
) -> Vec<f64> {
    let [c1, c2, c3, c4] = c;
    let step = hg.step();
    let v = hg.values();
    let mut z = Vec::with_capacity(v.len());
    let mut acc = 0.0;
    for j in 0..v.len() {
        let tau = j as f64 * step;
        z.push(tau.powf(gamma) * (c1 + c2 * acc));
        if j + 1 < v.len() {
            let (a, b) = (tau, tau + step);
            let zj = z[j];
            let sources = quad::integrate_default(|s| f1.eval(s, zj + c3) + f2.eval(s, zj + c4), a, b).unwrap();
            acc += sources + 0.5 * step * (v[j] + v[j + 1]);
        }
    }
    z
}

/// z_j = K₁ + K₂ (Σ_{i<j} φ₁^q(z_i) φ₂^q(z_i) · Δ · min_{cell i} h^q)^{1/q}.
pub fn lq_extremal(k1: f64, k2: f64, q: f64, hg: &GridFunction, phi1: &PhiFunction, phi2: &PhiFunction) -> Vec<f64> {
    let step = hg.step();
    let v = hg.values();
    let mut z = Vec::with_capacity(v.len());
    let mut acc: f64 = 0.0;
    for j in 0..v.len() {
        z.push(k1 + k2 * acc.powf(1.0 / q));
        if j + 1 < v.len() {
            let hmin = v[j].min(v[j + 1]);
            acc += (phi1.eval(z[j]) * phi2.eval(z[j])).powf(q) * step * hmin.powf(q);
        }
    }
    z
}

/// A smooth non-negative function a₀ + Σ a_k sin²(ω_k τ + θ_k).
pub struct RandomWave {
    pub base: f64,
    pub terms: Vec<(f64, f64, f64)>,
}

impl RandomWave {
    pub fn sample(rng: &mut ChaCha8Rng) -> Self {
        let n = rng.gen_range(1..=3);
        RandomWave {
            base: rng.gen_range(0.0..0.5),
            terms: (0..n)
                .map(|_| {
                    (
                        rng.gen_range(0.1..1.5),
                        rng.gen_range(0.2..4.0),
                        rng.gen_range(0.0..6.3),
                    )
                })
                .collect(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.base
            + self
                .terms
                .iter()
                .map(|&(a, w, th)| a * (w * t + th).sin().powi(2))
                .sum::<f64>()
    }

    pub fn grid(&self, t_end: f64, n: usize) -> GridFunction {
        GridFunction::from_fn(t_end, n, |t| self.eval(t)).unwrap()
    }
}

pub fn random_phi(rng: &mut ChaCha8Rng) -> PhiFunction {
    match rng.gen_range(0..3) {
        0 => PhiFunction::power(rng.gen_range(0.2..1.0)).unwrap(),
        1 => PhiFunction::identity(),
        _ => PhiFunction::shifted_power(rng.gen_range(0.2..2.0), rng.gen_range(0.2..1.0)).unwrap(),
    }
}

pub fn random_mclass(rng: &mut ChaCha8Rng) -> MClassFunction {
    let a = rng.gen_range(0.1..1.5);
    let lambda = rng.gen_range(0.2..2.0);
    match rng.gen_range(0..4) {
        0 => MClassFunction::linear_exp(a, lambda).unwrap(),
        1 => MClassFunction::log_exp(a, lambda).unwrap(),
        2 => MClassFunction::rational_exp(a, lambda).unwrap(),
        _ => MClassFunction::zero(),
    }
}

/// Both sides of the Hölder convolution estimate without the constant:
/// (∫₀^τ (τ−s)^{υ−1} s^λ g, τ^{υ+λ−1/r} (∫₀^τ g^r)^{1/r}).
///
/// The left side substitutes u = (τ−s)^υ, which removes the kernel singularity.
pub fn holder_sides(upsilon: f64, lambda: f64, r: f64, g: &dyn Fn(f64) -> f64, tau: f64) -> (f64, f64) {
    let s_of = |u: f64| (tau - u.powf(1.0 / upsilon)).max(0.0);
    let lhs = quad::integrate_default(|u| s_of(u).powf(lambda) * g(s_of(u)), 0.0, tau.powf(upsilon)).unwrap() / upsilon;
    let norm = quad::integrate_default(|s| g(s).powf(r), 0.0, tau)
        .unwrap()
        .powf(1.0 / r);
    (lhs, tau.powf(upsilon + lambda - 1.0 / r) * norm)
}
