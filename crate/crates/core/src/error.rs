//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not symmetric: max |M - M^T| entry is {max_dev:e}")]
    NotSymmetric { max_dev: f64 },

    #[error("eigensolver failed to converge at index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "truncation not converged: level {level} changes by {delta:e} \
         between N = {n_max} and N = {n_check}"
    )]
    TruncationNotConverged {
        level: usize,
        delta: f64,
        n_max: usize,
        n_check: usize,
    },

    #[error("coherent amplitude too large for truncation: alpha^2 = {alpha_sq} exceeds N/4 = {limit}")]
    TruncationDominated { alpha_sq: f64, limit: f64 },

    #[error(
        "approximate eigenbasis spans only {completeness} of the initial state \
         (requires >= 1 - 1e-6); raise the Fock truncation"
    )]
    IncompleteBasis { completeness: f64 },

    #[error("dressed spin basis is undefined at delta = 0; use the exact displaced-oscillator solution instead")]
    ZeroDetuning,
}
