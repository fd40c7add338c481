use thiserror::Error;

/// Errors raised by the spectral, solver and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("field is not Hermitian: defect {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("field has nonzero mean (|u(0)| = {0:e})")]
    NonzeroMean(f64),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("weight overflow: exponent {exponent:.1} exceeds {limit:.1}")]
    WeightOverflow { exponent: f64, limit: f64 },

    #[error("blow-up at t = {time}: max coefficient {max_abs:e}")]
    BlowUp { time: f64, max_abs: f64 },

    #[error("field is identically zero")]
    ZeroField,

    #[error("smallness condition violated: {0}")]
    SmallnessViolated(String),

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable identifier used in JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NonzeroMean(_) => "nonzero_mean",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidTimeGrid(_) => "invalid_time_grid",
            Error::EmptyTrajectory => "empty_trajectory",
            Error::WeightOverflow { .. } => "weight_overflow",
            Error::BlowUp { .. } => "blow_up",
            Error::ZeroField => "zero_field",
            Error::SmallnessViolated(_) => "smallness_violated",
            Error::Oracle(_) => "oracle",
            Error::Format(_) => "format",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
