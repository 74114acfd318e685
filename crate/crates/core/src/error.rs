//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by constructors, conversions, and decision procedures.
#[derive(Debug, Clone, Error)]
pub enum ChoiError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("vector of length {len} cannot be reshaped to {rows}x{cols}")]
    LengthMismatch { len: usize, rows: usize, cols: usize },

    #[error("dimension {dim} is not a perfect square")]
    NotPerfectSquare { dim: usize },

    #[error(
        "matrix is not Hermitian: deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.6e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("expected a rank-one matrix, got numeric rank {rank}")]
    NotRankOne { rank: usize },

    #[error("family of {count} vectors has rank {rank}, not a basis of C^{dim}")]
    NotABasis { dim: usize, count: usize, rank: usize },

    #[error("ordered family must have {expected} elements, got {got}")]
    WrongElementCount { expected: usize, got: usize },

    #[error("a Kraus set must contain at least one operator")]
    EmptyKrausSet,

    #[error("matrix is numerically singular and cannot be inverted")]
    SingularMatrix,

    #[error("reconstruction residual {residual:.3e} exceeds bound {bound:.3e}")]
    ReconstructionFailed { residual: f64, bound: f64 },

    #[error("tolerance {name} = {value} must lie in [0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}
