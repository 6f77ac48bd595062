use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QlssError {
    #[error("no solution: least-squares residual {residual:.3e} exceeds tolerance")]
    NoSolution { residual: f64 },
    #[error("invalid norm target {target}: must lie in [1, {kappa}]")]
    InvalidTarget { target: f64, kappa: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("gap violation: singular value {value:.6e} below gap {delta:.6e}")]
    GapViolation { value: f64, delta: f64 },
    #[error("operator norm {0:.6e} exceeds 1")]
    NormTooLarge(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("iteration cap of {0} exceeded")]
    CapExceeded(u64),
}

impl QlssError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            QlssError::NoSolution { .. } => "no_solution",
            QlssError::InvalidTarget { .. } => "invalid_target",
            QlssError::InvalidParams(_) => "invalid_params",
            QlssError::Domain(_) => "domain_error",
            QlssError::GapViolation { .. } => "gap_violation",
            QlssError::NormTooLarge(_) => "norm_too_large",
            QlssError::ShapeMismatch(_) => "shape_mismatch",
            QlssError::SearchFailed(_) => "search_failed",
            QlssError::BadInput(_) => "bad_input",
            QlssError::CapExceeded(_) => "cap_exceeded",
        }
    }
}

pub type Result<T> = std::result::Result<T, QlssError>;

pub(crate) fn domain(msg: impl Into<String>) -> QlssError {
    QlssError::Domain(msg.into())
}
