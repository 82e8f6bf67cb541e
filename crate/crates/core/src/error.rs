use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid function: {0}")]
    InvalidGrid(String),

    /// The corrector fixed-point iteration did not settle within the cap.
    #[error("corrector failed to converge at node {node} (tau = {tau}) after {iterations} iterations")]
    StepFailure { node: usize, tau: f64, iterations: usize },

    #[error("right-hand side evaluated to a non-finite value at node {node} (tau = {tau})")]
    NonFiniteRhs { node: usize, tau: f64 },

    /// A sampled class-membership check (Φ or M) failed.
    #[error("class violation: {0}")]
    ClassViolation(String),

    /// A hypothesis of a bound could not be established, so the bound does not apply.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that mean "the bound does not apply" rather than
    /// "the computation broke".
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(self, Error::HypothesisViolation(_) | Error::ClassViolation(_))
    }
}
