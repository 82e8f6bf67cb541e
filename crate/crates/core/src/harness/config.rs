//! Experiment configuration (one JSON document, unknown keys rejected).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bihari_bounds::LqVariant;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub problem: ProblemConfig,
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundConfig>,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
    pub output: OutputConfig,
    #[serde(default)]
    pub seed: u64,
    /// Pinned regression values, relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudyTarget>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKindConfig {
    Direct,
    Sequential,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub kind: ProblemKindConfig,
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    pub b1: f64,
    /// Second initial value; sequential problems only.
    #[serde(default)]
    pub b2: f64,
    pub rhs: RhsConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RhsConfig {
    pub id: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_end: f64,
    pub n_steps: usize,
    #[serde(default = "one")]
    pub refinement_levels: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiConfig {
    Power { r: f64 },
    Identity,
    Constant { c: f64 },
    ShiftedPower { shift: f64, r: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IntegrandConfig {
    Zero,
    ExpDecay { rate: f64, coefficient: f64 },
    PowerDecay { exponent: f64, coefficient: f64 },
    PowerExp { power: f64, rate: f64, coefficient: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MClassConfig {
    Zero,
    LinearExp { a: f64, lambda: f64 },
    LogExp { a: f64, lambda: f64 },
    RationalExp { a: f64, lambda: f64 },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum VariantConfig {
    Literal,
    #[default]
    Corrected,
}

impl From<VariantConfig> for LqVariant {
    fn from(v: VariantConfig) -> Self {
        match v {
            VariantConfig::Literal => LqVariant::Literal,
            VariantConfig::Corrected => LqVariant::Corrected,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundConfig {
    /// |f| ≤ φ(|x|)·P(τ), sequential problem.
    PowerGrowth { phi: PhiConfig, p: IntegrandConfig },
    /// |f| ≤ F₁(τ, |x|) + F₂(τ, τ^β|D^β x|), sequential problem.
    FractionalSource { f1: MClassConfig, f2: MClassConfig },
    /// |f| ≤ τ^{1/q−α} h(τ) φ₁(|x|) φ₂(|D^β x|), direct problem.
    /// `tau0` defaults to the grid step.
    Uniform {
        q: f64,
        phi1: PhiConfig,
        phi2: PhiConfig,
        h: IntegrandConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau0: Option<f64>,
        #[serde(default)]
        variant: VariantConfig,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckConfig {
    /// Relative spread of x/τ^α over the trailing window.
    Slope {
        tol: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        window_fraction: Option<f64>,
    },
    /// |x(T)/T^α − D^α x(T)/Γ(1+α)|.
    Lhopital { tol: f64 },
    /// Same comparison between Aitken-accelerated limits.
    LhopitalLimit { tol: f64 },
    /// max |x|/envelope ≤ 1 + tol.
    BoundEnvelope { tol: f64 },
    /// max(sup|x|, sup_{τ≥τ₀}|D^β x|)/C ≤ 1 + tol.
    Boundedness { tol: f64 },
    /// The configured bound's hypotheses hold.
    Hypothesis,
    /// Max defect of the discrete integral equation.
    Residual { tol: f64 },
    /// Smallest empirical order in a refinement study.
    Order { min_order: f64 },
    /// Relative agreement with pinned expectations.
    Regression { tol: f64 },
}

impl CheckConfig {
    pub fn kind_name(&self) -> &'static str {
        match self {
            CheckConfig::Slope { .. } => "slope",
            CheckConfig::Lhopital { .. } => "lhopital",
            CheckConfig::LhopitalLimit { .. } => "lhopital_limit",
            CheckConfig::BoundEnvelope { .. } => "bound_envelope",
            CheckConfig::Boundedness { .. } => "boundedness",
            CheckConfig::Hypothesis => "hypothesis",
            CheckConfig::Residual { .. } => "residual",
            CheckConfig::Order { .. } => "order",
            CheckConfig::Regression { .. } => "regression",
        }
    }

    fn tolerance(&self) -> Option<f64> {
        match *self {
            CheckConfig::Slope { tol, .. }
            | CheckConfig::Lhopital { tol }
            | CheckConfig::LhopitalLimit { tol }
            | CheckConfig::BoundEnvelope { tol }
            | CheckConfig::Boundedness { tol }
            | CheckConfig::Residual { tol }
            | CheckConfig::Regression { tol } => Some(tol),
            CheckConfig::Order { min_order } => Some(min_order),
            CheckConfig::Hypothesis => None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
}

/// What a refinement study measures.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum StudyTarget {
    /// Max error of the solver against the catalog's closed-form solution.
    ExactSolution,
    /// I^β I^α g − I^{α+β} g for g = 1 − cos τ, with (α, β) = (alpha, beta).
    Semigroup,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_json(&text)?;
        if let Some(rel) = cfg.expectations.take() {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            cfg.expectations = Some(if rel.is_absolute() { rel } else { base.join(rel) });
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.grid.t_end > 0.0) || !self.grid.t_end.is_finite() {
            return bad(format!("grid.t_end must be positive, got {}", self.grid.t_end));
        }
        if self.grid.n_steps < 2 {
            return bad(format!("grid.n_steps must be at least 2, got {}", self.grid.n_steps));
        }
        if self.grid.refinement_levels < 1 {
            return bad("grid.refinement_levels must be at least 1".into());
        }
        for c in &self.checks {
            if let Some(t) = c.tolerance() {
                if !(t > 0.0) || !t.is_finite() {
                    return bad(format!("check {} needs a positive tolerance, got {t}", c.kind_name()));
                }
            }
            let needs_bound = matches!(
                c,
                CheckConfig::BoundEnvelope { .. } | CheckConfig::Boundedness { .. } | CheckConfig::Hypothesis
            );
            if needs_bound && self.bound.is_none() {
                return bad(format!("check {} needs a `bound` section", c.kind_name()));
            }
            if let CheckConfig::Slope {
                window_fraction: Some(w),
                ..
            } = c
            {
                if !(*w > 0.0 && *w <= 0.9) {
                    return bad(format!("slope window_fraction must lie in (0, 0.9], got {w}"));
                }
            }
        }
        if !super::catalog::contains(&self.problem.rhs.id) {
            return bad(format!("unknown catalog id {:?}", self.problem.rhs.id));
        }
        Ok(())
    }

    /// Applies command-line overrides.
    pub fn with_overrides(
        mut self,
        t_end: Option<f64>,
        n_steps: Option<usize>,
        seed: Option<u64>,
        out_dir: Option<&Path>,
    ) -> Result<Self> {
        if let Some(t) = t_end {
            self.grid.t_end = t;
        }
        if let Some(n) = n_steps {
            self.grid.n_steps = n;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(dir) = out_dir {
            let rebase = |p: &Path| dir.join(p.file_name().unwrap_or(p.as_os_str()));
            self.output.csv_path = rebase(&self.output.csv_path);
            self.output.report_path = rebase(&self.output.report_path);
        }
        self.validate()?;
        Ok(self)
    }
}
