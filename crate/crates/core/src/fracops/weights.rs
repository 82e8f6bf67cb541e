//! Convolution weights for product integration on a uniform grid.
//!
//! All differences of powers are formed through `expm1`/`ln_1p` so that the
//! weights stay accurate for lags in the tens of thousands.

use super::gamma::gamma_pos;

/// k^p − (k−1)^p for k ≥ 1.
pub(crate) fn first_difference(k: usize, p: f64) -> f64 {
    let kf = k as f64;
    -kf.powf(p) * (p * (-1.0 / kf).ln_1p()).exp_m1()
}

/// (k+1)^p − 2k^p + (k−1)^p for k ≥ 1.
fn second_difference(k: usize, p: f64) -> f64 {
    let kf = k as f64;
    let up = (p * (1.0 / kf).ln_1p()).exp_m1();
    let down = (p * (-1.0 / kf).ln_1p()).exp_m1();
    kf.powf(p) * (up + down)
}

/// (n−1)^{ρ+1} − (n−1−ρ)·n^ρ, the weight of the left endpoint at node n.
fn endpoint_weight(n: usize, rho: f64) -> f64 {
    let nf = n as f64;
    nf.powf(rho) * ((nf - 1.0) * (rho * (-1.0 / nf).ln_1p()).exp_m1() + rho)
}

/// Product-trapezoid weights for the order-ρ Riemann–Liouville integral:
/// the sample function is replaced by its piecewise-linear interpolant and
/// integrated exactly against (τ_n − s)^{ρ−1}/Γ(ρ).
#[derive(Debug, Clone)]
pub(crate) struct TrapezoidWeights {
    rho: f64,
    scale: f64,
    interior: Vec<f64>,
}

impl TrapezoidWeights {
    pub(crate) fn new(rho: f64, h: f64, n_max: usize) -> Self {
        let scale = h.powf(rho) / gamma_pos(rho + 2.0);
        let mut interior = vec![0.0; n_max + 1];
        for (k, w) in interior.iter_mut().enumerate().skip(1) {
            *w = second_difference(k, rho + 1.0);
        }
        TrapezoidWeights { rho, scale, interior }
    }

    /// Weight of g_0 at node n (scaled).
    pub(crate) fn start(&self, n: usize) -> f64 {
        self.scale * endpoint_weight(n, self.rho)
    }

    /// Weight of g_n at node n (scaled).
    pub(crate) fn diagonal(&self) -> f64 {
        self.scale
    }

    /// Σ_{j=1}^{n−1} w_{n−j} g_j (scaled).
    pub(crate) fn interior_sum(&self, g: &[f64], n: usize) -> f64 {
        if n < 2 {
            return 0.0;
        }
        let s: f64 = g[1..n]
            .iter()
            .zip(self.interior[1..n].iter().rev())
            .map(|(a, b)| a * b)
            .sum();
        self.scale * s
    }

    /// Every weight at node n except the diagonal one.
    pub(crate) fn history(&self, g: &[f64], n: usize) -> f64 {
        self.start(n) * g[0] + self.interior_sum(g, n)
    }

    #[cfg(test)]
    pub(crate) fn raw_interior(&self) -> &[f64] {
        &self.interior
    }
}

/// Product-rectangle (left endpoint) weights for the order-ρ integral; the
/// explicit predictor of the fractional Adams scheme.
#[derive(Debug, Clone)]
pub(crate) struct RectangleWeights {
    weights: Vec<f64>,
}

impl RectangleWeights {
    pub(crate) fn new(rho: f64, h: f64, n_max: usize) -> Self {
        let scale = h.powf(rho) / gamma_pos(rho + 1.0);
        let mut weights = vec![0.0; n_max + 1];
        for (k, w) in weights.iter_mut().enumerate().skip(1) {
            *w = scale * first_difference(k, rho);
        }
        RectangleWeights { weights }
    }

    /// Σ_{j=0}^{n−1} b_{n−j} g_j.
    pub(crate) fn sum(&self, g: &[f64], n: usize) -> f64 {
        g[..n]
            .iter()
            .zip(self.weights[1..=n].iter().rev())
            .map(|(a, b)| a * b)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_differences_match_naive_for_small_lags() {
        for &p in &[0.3, 1.0, 1.5, 2.0] {
            for k in 1..20usize {
                let kf = k as f64;
                let naive1 = kf.powf(p) - (kf - 1.0).powf(p);
                assert!((first_difference(k, p) - naive1).abs() < 1e-12);
                let naive2 = (kf + 1.0).powf(p) - 2.0 * kf.powf(p) + (kf - 1.0).powf(p);
                assert!((second_difference(k, p) - naive2).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn order_one_reduces_to_trapezoid() {
        let w = TrapezoidWeights::new(1.0, 0.1, 10);
        assert!((w.diagonal() - 0.05).abs() < 1e-15);
        assert!((w.start(7) - 0.05).abs() < 1e-15);
        for k in 1..=10 {
            assert!((w.raw_interior()[k] * 0.05 - 0.1).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_non_negative() {
        for &rho in &[0.1, 0.3, 0.5, 0.9, 1.0, 1.5, 1.9] {
            let w = TrapezoidWeights::new(rho, 0.01, 5000);
            assert!(w.diagonal() > 0.0);
            for n in 1..=5000 {
                assert!(w.start(n) >= 0.0, "rho={rho} n={n}");
            }
            assert!(w.raw_interior()[1..].iter().all(|&v| v >= 0.0), "rho={rho}");
        }
    }
}
