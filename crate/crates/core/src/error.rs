use thiserror::Error;

/// Errors raised by cell construction, sampling, and the boundary solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeTooHigh { degree: u32, max: u32 },

    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("matrix is singular to working precision (pivot {pivot:e} in column {column}; condition estimate {condition:e})")]
    Singular {
        column: usize,
        pivot: f64,
        condition: f64,
    },

    #[error("iterative solver stopped after {iterations} iterations with relative residual {residual:e} (tolerance {tolerance:e})")]
    NotConverged {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("functions were prepared on different sampled boundaries")]
    CellMismatch,

    #[error("{0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
