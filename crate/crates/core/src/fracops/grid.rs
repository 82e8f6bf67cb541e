use crate::{Error, Result};

/// A real function sampled on the uniform grid τ_j = j·T/N, j = 0..=N.
///
/// Samples are interpreted as the piecewise-linear interpolant wherever the
/// crate needs values between nodes or integrals over the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    t_end: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(t_end: f64, values: Vec<f64>) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::InvalidGrid(format!("horizon must be positive, got {t_end}")));
        }
        if values.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples (N >= 1), got {}",
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("sample {j} is not finite ({})", values[j])));
        }
        Ok(GridFunction { t_end, values })
    }

    /// Samples `f` at the N+1 grid nodes.
    pub fn from_fn(t_end: f64, n_steps: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = t_end / n_steps as f64;
        let values = (0..=n_steps).map(|j| f(j as f64 * h)).collect();
        Self::new(t_end, values)
    }

    pub fn constant(t_end: f64, n_steps: usize, c: f64) -> Result<Self> {
        Self::new(t_end, vec![c; n_steps + 1])
    }

    pub fn zeros(t_end: f64, n_steps: usize) -> Result<Self> {
        Self::constant(t_end, n_steps, 0.0)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.t_end / self.n_steps() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn tau(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    pub fn taus(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.values.len()).map(move |j| j as f64 * h)
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("grid has at least two samples")
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.values.len() == other.values.len() && self.t_end == other.t_end
    }

    fn check_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "grid mismatch: (T={}, N={}) vs (T={}, N={})",
                self.t_end,
                self.n_steps(),
                other.t_end,
                other.n_steps()
            )))
        }
    }

    /// Applies `f(τ, value)` node-wise.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let h = self.step();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| f(j as f64 * h, v))
            .collect();
        Self::new(self.t_end, values)
    }

    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.t_end, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    fn locate(&self, tau: f64) -> Result<(usize, f64)> {
        let slack = 1e-12 * self.t_end;
        if !(tau >= -slack && tau <= self.t_end + slack) {
            return Err(Error::domain(format!("tau = {tau} outside grid [0, {}]", self.t_end)));
        }
        let h = self.step();
        let s = (tau / h).clamp(0.0, self.n_steps() as f64);
        let j = (s.floor() as usize).min(self.n_steps() - 1);
        Ok((j, (s - j as f64).clamp(0.0, 1.0)))
    }

    /// Linear interpolation at τ ∈ [0, T].
    pub fn eval(&self, tau: f64) -> Result<f64> {
        let (j, w) = self.locate(tau)?;
        Ok((1.0 - w) * self.values[j] + w * self.values[j + 1])
    }

    /// Running trapezoid integral ∫₀^τ_j g, exact for the linear interpolant.
    pub fn cumulative_integral(&self) -> GridFunction {
        let h = self.step();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.values.len());
        out.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            out.push(acc);
        }
        GridFunction {
            t_end: self.t_end,
            values: out,
        }
    }

    /// Visits every (sub)cell of [from, to] with its endpoints and the
    /// interpolated values there.
    fn for_each_piece(&self, from: f64, to: f64, mut visit: impl FnMut(f64, f64, f64, f64)) -> Result<()> {
        if to < from {
            return Err(Error::domain(format!("integration limits reversed: {from} > {to}")));
        }
        let (j0, _) = self.locate(from)?;
        let (j1, _) = self.locate(to)?;
        let h = self.step();
        for j in j0..=j1.min(self.n_steps() - 1) {
            let a = (j as f64 * h).max(from);
            let b = ((j + 1) as f64 * h).min(to);
            if b <= a {
                continue;
            }
            let ga = self.eval(a)?;
            let gb = self.eval(b)?;
            visit(a, b, ga, gb);
        }
        Ok(())
    }

    /// ∫_from^to g(s) ds for the piecewise-linear interpolant.
    pub fn integral(&self, from: f64, to: f64) -> Result<f64> {
        let mut acc = 0.0;
        self.for_each_piece(from, to, |a, b, ga, gb| acc += 0.5 * (b - a) * (ga + gb))?;
        Ok(acc)
    }

    /// ∫_from^to s^γ g(s) ds, exact for the piecewise-linear interpolant (γ > −1).
    pub fn weighted_integral(&self, gamma: f64, from: f64, to: f64) -> Result<f64> {
        if !(gamma > -1.0) || from < 0.0 {
            return Err(Error::domain(format!(
                "weighted integral needs gamma > -1 and from >= 0 (gamma = {gamma}, from = {from})"
            )));
        }
        let moment = |k: f64, a: f64, b: f64| (b.powf(k) - a.powf(k)) / k;
        let mut acc = 0.0;
        self.for_each_piece(from, to, |a, b, ga, gb| {
            let slope = (gb - ga) / (b - a);
            let intercept = ga - slope * a;
            acc += intercept * moment(gamma + 1.0, a, b) + slope * moment(gamma + 2.0, a, b);
        })?;
        Ok(acc)
    }

    /// ∫_from^to g(s)^q ds for a non-negative piecewise-linear interpolant.
    pub fn power_integral(&self, q: f64, from: f64, to: f64) -> Result<f64> {
        if !(q > 0.0) {
            return Err(Error::domain(format!("power must be positive, got {q}")));
        }
        if self.min_value() < 0.0 {
            return Err(Error::domain("power integral requires g >= 0"));
        }
        let mut acc = 0.0;
        self.for_each_piece(from, to, |a, b, ga, gb| {
            let d = gb - ga;
            acc += if d.abs() <= 1e-12 * (ga.abs() + gb.abs()) {
                (b - a) * (0.5 * (ga + gb)).powf(q)
            } else {
                (b - a) * (gb.powf(q + 1.0) - ga.powf(q + 1.0)) / ((q + 1.0) * d)
            };
        })?;
        Ok(acc)
    }
}
