use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a < b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("{label}: phi({x}) = {value} leaves [{a}, {b}]")]
    RangeViolation {
        label: String,
        x: f64,
        value: f64,
        a: f64,
        b: f64,
    },

    #[error("evaluation of {label} at {x} is outside its domain or not finite")]
    Evaluation { label: String, x: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}]: estimate {value} with error {err_estimate} after {evaluations} evaluations")]
    NonConvergence {
        lo: f64,
        hi: f64,
        value: f64,
        err_estimate: f64,
        evaluations: usize,
    },

    #[error("invalid integration request: {0}")]
    InvalidQuadrature(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate phi: every sampled pair has phi(x) = phi(y)")]
    DegeneratePhi,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Precondition failures are recorded as skips rather than failures.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_) | Error::DegeneratePhi)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
