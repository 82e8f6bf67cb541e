use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use crate::asymptotics::{improper_tail, Integrand, TailClass, Verdict};
use crate::quad::{self, Tolerance};
use crate::{Error, Result};

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Default lower limit ξ₀ of the E-transform.
pub const DEFAULT_XI0: f64 = 1e-8;

const E_TOL: Tolerance = Tolerance { abs: 1e-15, rel: 1e-12 };

/// Largest argument E⁻¹ will search before reporting a blow-up.
const XI_CEILING: f64 = 1e300;

/// A comparison function φ: (0, ∞) → (0, ∞), nondecreasing, with the lower
/// limit ξ₀ of its E-transform and, when known, its power growth at infinity.
#[derive(Clone)]
pub struct PhiFunction {
    name: String,
    f: Arc<ScalarFn>,
    xi0: f64,
    /// φ(s) ~ coefficient·s^exponent as s → ∞.
    growth: Option<(f64, f64)>,
}

impl PhiFunction {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        PhiFunction {
            name: name.into(),
            f: Arc::new(f),
            xi0: DEFAULT_XI0,
            growth: None,
        }
    }

    /// Declares φ(s) ~ coefficient·s^exponent for large s.
    pub fn with_growth(mut self, exponent: f64, coefficient: f64) -> Self {
        self.growth = Some((exponent, coefficient));
        self
    }

    pub fn with_xi0(mut self, xi0: f64) -> Result<Self> {
        if !(xi0 > 0.0) || !xi0.is_finite() {
            return Err(Error::domain(format!("xi0 must be positive, got {xi0}")));
        }
        self.xi0 = xi0;
        Ok(self)
    }

    /// φ(s) = s^r.
    pub fn power(r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::domain(format!("power exponent must be positive, got {r}")));
        }
        Ok(PhiFunction::new(format!("s^{r}"), move |s| s.powf(r)).with_growth(r, 1.0))
    }

    /// φ(s) = s (the Gronwall case).
    pub fn identity() -> Self {
        PhiFunction::new("s", |s| s).with_growth(1.0, 1.0)
    }

    /// φ ≡ c.
    pub fn constant(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("constant must be positive, got {c}")));
        }
        Ok(PhiFunction::new(format!("{c}"), move |_| c).with_growth(0.0, c))
    }

    /// φ(s) = (shift + s)^r.
    pub fn shifted_power(shift: f64, r: f64) -> Result<Self> {
        if !(shift >= 0.0) || !(r > 0.0) {
            return Err(Error::domain(format!(
                "shifted power needs shift >= 0, r > 0 (got {shift}, {r})"
            )));
        }
        Ok(PhiFunction::new(format!("({shift}+s)^{r}"), move |s| (shift + s).powf(r)).with_growth(r, 1.0))
    }

    /// ψ(s) = φ₁^q(s^{1/q})·φ₂^q(s^{1/q}), the comparison function of the
    /// L_q form of the Bihari inequality.
    pub fn lq_composite(phi1: &PhiFunction, phi2: &PhiFunction, q: f64) -> Result<Self> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::domain(format!("q must exceed 1, got {q}")));
        }
        let (f1, f2) = (Arc::clone(&phi1.f), Arc::clone(&phi2.f));
        let psi = PhiFunction::new(
            format!("[{}]^{q}[{}]^{q} at s^(1/{q})", phi1.name, phi2.name),
            move |s| {
                let z = s.powf(1.0 / q);
                (f1(z) * f2(z)).powf(q)
            },
        );
        Ok(match (phi1.growth, phi2.growth) {
            (Some((p1, c1)), Some((p2, c2))) => psi.with_growth(p1 + p2, (c1 * c2).powf(q)),
            _ => psi,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn growth(&self) -> Option<(f64, f64)> {
        self.growth
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    /// 1/φ as an integrand, tagged with the power tail implied by the
    /// declared growth.
    pub fn reciprocal(&self) -> Integrand {
        let f = Arc::clone(&self.f);
        let tail = match self.growth {
            Some((p, c)) => TailClass::Power {
                exponent: p,
                coefficient: 1.0 / c,
            },
            None => TailClass::Unknown,
        };
        Integrand::new(format!("1/({})", self.name), tail, move |s| 1.0 / f(s))
    }

    /// Verdict on ∫^∞ ds/φ; `Diverges` means E maps onto [E(ξ₀), ∞).
    pub fn divergence_verdict(&self) -> Result<Verdict> {
        Ok(improper_tail(&self.reciprocal(), 0.0, self.xi0.max(1.0))?.1)
    }

    /// Sampled membership test for class Φ: φ positive and nondecreasing on
    /// a log lattice over [1e-6, 1e6], and (1/v)φ(w) ≤ φ(w/v) for lattice
    /// v ≥ 1, w > 0.
    pub fn check_class(&self, lattice: usize) -> Result<()> {
        let n = lattice.max(2);
        let point = |k: usize, lo: f64, hi: f64| lo * (hi / lo).powf(k as f64 / (n - 1) as f64);
        let mut prev = 0.0;
        for k in 0..n {
            let s = point(k, 1e-6, 1e6);
            let v = self.eval(s);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::ClassViolation(format!(
                    "{}: phi({s}) = {v} is not positive",
                    self.name
                )));
            }
            if v < prev * (1.0 - 1e-12) {
                return Err(Error::ClassViolation(format!("{}: decreases at s = {s}", self.name)));
            }
            prev = v;
        }
        for i in 0..n {
            let v = point(i, 1.0, 1e3);
            for j in 0..n {
                let w = point(j, 1e-6, 1e6);
                if self.eval(w) / v > self.eval(w / v) * (1.0 + 1e-12) {
                    return Err(Error::ClassViolation(format!(
                        "{}: sub-homogeneity fails at v = {v}, w = {w}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PhiFunction")
            .field("name", &self.name)
            .field("xi0", &self.xi0)
            .field("growth", &self.growth)
            .finish()
    }
}

/// Result of inverting E: a finite point, or +∞ when the target exceeds the
/// range of E (or the inverse overflows f64).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    BlowUp,
}

impl BoundValue {
    /// The value, with a blow-up mapped to +∞.
    pub fn value(self) -> f64 {
        match self {
            BoundValue::Finite(v) => v,
            BoundValue::BlowUp => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, BoundValue::Finite(_))
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> BoundValue {
        match self {
            BoundValue::Finite(v) => {
                let w = f(v);
                if w.is_finite() {
                    BoundValue::Finite(w)
                } else {
                    BoundValue::BlowUp
                }
            }
            BoundValue::BlowUp => BoundValue::BlowUp,
        }
    }
}

/// ∫_a^b ds/φ(s) for 0 < a, b, computed in the variable u = ln s.
fn e_between(phi: &PhiFunction, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let bad = Cell::new(None);
    let integrand = |u: f64| {
        let s = u.exp();
        let v = phi.eval(s);
        if !(v > 0.0) {
            bad.set(Some((s, v)));
            return 0.0;
        }
        s / v
    };
    let value = quad::integrate(integrand, a.ln(), b.ln(), E_TOL);
    if let Some((s, v)) = bad.get() {
        return Err(Error::ClassViolation(format!(
            "{}: phi({s}) = {v} is not positive",
            phi.name
        )));
    }
    value
}

/// E(ξ) = ∫_{ξ₀}^{ξ} ds/φ(s); negative for ξ < ξ₀.
pub fn e_transform(phi: &PhiFunction, xi: f64) -> Result<f64> {
    if !(xi > 0.0) || !xi.is_finite() {
        return Err(Error::domain(format!("E needs a positive argument, got {xi}")));
    }
    e_between(phi, phi.xi0, xi)
}

/// Solves E(ξ) = y.
///
/// The upper (or lower) bracket grows geometrically from ξ₀; inside the
/// bracket a Newton iteration with E′ = 1/φ is safeguarded by bisection in
/// log scale. Targets beyond E(1e300) return [`BoundValue::BlowUp`].
pub fn e_inverse(phi: &PhiFunction, y: f64) -> Result<BoundValue> {
    if y == f64::INFINITY {
        return Ok(BoundValue::BlowUp);
    }
    if !y.is_finite() {
        return Err(Error::domain(format!("E inverse needs a finite target, got {y}")));
    }
    let xi0 = phi.xi0;
    if y == 0.0 {
        return Ok(BoundValue::Finite(xi0));
    }

    // Bracket [lo, hi] with E(lo) ≤ y ≤ E(hi).
    let (mut lo, mut e_lo, mut hi, mut e_hi);
    if y > 0.0 {
        lo = xi0;
        e_lo = 0.0;
        loop {
            hi = 2.0 * lo;
            if hi > XI_CEILING {
                return Ok(BoundValue::BlowUp);
            }
            e_hi = e_lo + e_between(phi, lo, hi)?;
            if e_hi >= y {
                break;
            }
            lo = hi;
            e_lo = e_hi;
        }
    } else {
        hi = xi0;
        e_hi = 0.0;
        loop {
            lo = 0.5 * hi;
            if lo < f64::MIN_POSITIVE {
                return Err(Error::domain(format!("target {y} lies below the range of E")));
            }
            e_lo = e_hi - e_between(phi, lo, hi)?;
            if e_lo <= y {
                break;
            }
            hi = lo;
            e_hi = e_lo;
        }
    }

    let mut xi = lo + (y - e_lo) / (e_hi - e_lo) * (hi - lo);
    if !(xi > lo && xi < hi) {
        xi = (lo * hi).sqrt();
    }
    for _ in 0..200 {
        let e = e_lo + e_between(phi, lo, xi)?;
        let r = e - y;
        if r == 0.0 {
            return Ok(BoundValue::Finite(xi));
        }
        if r > 0.0 {
            hi = xi;
        } else {
            lo = xi;
            e_lo = e;
        }
        let mut next = xi - r * phi.eval(xi);
        if !(next > lo && next < hi) {
            next = (lo * hi).sqrt();
        }
        if (next - xi).abs() <= 1e-14 * xi || hi - lo <= 1e-15 * hi {
            return Ok(BoundValue::Finite(next));
        }
        xi = next;
    }
    Err(Error::domain(format!("E inverse did not settle for target {y}")))
}

/// E⁻¹(E(start) + increment); exactly `start` when the increment is zero.
/// A zero start is replaced by the smallest positive normal number, which
/// keeps every bound built on it valid.
pub(crate) fn advance(phi: &PhiFunction, start: f64, increment: f64) -> Result<BoundValue> {
    let start = start.max(f64::MIN_POSITIVE);
    if increment == 0.0 {
        return Ok(BoundValue::Finite(start));
    }
    e_inverse(phi, e_transform(phi, start)? + increment)
}
