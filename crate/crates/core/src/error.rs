use thiserror::Error;

/// Errors raised by tensor operations and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("mode {mode} out of range for tensor of order {order}")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("tensor is not antisymmetric (defect {defect:e} exceeds tolerance {tol:e})")]
    NotAntisymmetric { defect: f64, tol: f64 },

    #[error("matrix is not symmetric (defect {defect:e} exceeds tolerance {tol:e})")]
    NotSymmetric { defect: f64, tol: f64 },

    #[error("columns are not orthonormal (defect {0:e})")]
    NotOrthonormal(f64),

    #[error("rank {rank} out of range: {reason}")]
    InvalidRank { rank: usize, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
