use thiserror::Error;

/// Errors raised by the distribution, likelihood, estimation and inference layers.
#[derive(Debug, Clone, Error)]
pub enum GhError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge after {iterations} iterations (target {target})")]
    RootNotConverged { target: f64, iterations: usize },

    #[error("value {value} lies outside the support of the distribution")]
    OutOfSupport { value: f64 },

    #[error(
        "support check failed: observations [{y_min}, {y_max}] not inside knot range [{lower}, {upper}]"
    )]
    SupportViolation {
        lower: f64,
        upper: f64,
        y_min: f64,
        y_max: f64,
    },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("insufficient sample: need at least {needed} observations, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("initialization failure: {0}")]
    InitializationFailure(String),

    #[error("optimizer did not converge after {iterations} iterations (best objective {value})")]
    NotConverged {
        iterations: usize,
        value: f64,
        best: Vec<f64>,
    },

    #[error("information matrix is singular at working precision")]
    SingularInformation,

    #[error("unknown estimation method '{0}'")]
    UnknownMethod(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = GhError> = std::result::Result<T, E>;

impl From<std::io::Error> for GhError {
    fn from(e: std::io::Error) -> Self {
        GhError::Io(e.to_string())
    }
}

impl From<csv::Error> for GhError {
    fn from(e: csv::Error) -> Self {
        GhError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for GhError {
    fn from(e: serde_json::Error) -> Self {
        GhError::Io(e.to_string())
    }
}
