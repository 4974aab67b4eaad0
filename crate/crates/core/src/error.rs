use thiserror::Error;

/// Errors raised by the geometry, structure, topology and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("operation needs a form of degree at least {min}, got {got}")]
    DegreeTooLow { min: usize, got: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("invalid topology data: {0}")]
    InvalidTopology(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid input field: {0}")]
    InvalidField(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("linear solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("monotone iteration violated at step {step}: {detail}")]
    MonotonicityViolation { step: usize, detail: String },

    #[error("monotone iteration exceeded {max_iter} steps (last step {last_delta:e})")]
    MaxIterations { max_iter: usize, last_delta: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
