use thiserror::Error;

/// Unified error type for the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or non-finite input data.
    #[error("data error: {0}")]
    Data(String),
    /// Model parameters outside their valid ranges.
    #[error("spec error: {0}")]
    Spec(String),
    /// Invalid run configuration (windows, sizes, flags).
    #[error("config error: {0}")]
    Config(String),
    /// Problem instance too large for an exact method.
    #[error("size error: {0}")]
    Size(String),
    /// Constraint system has no (strictly) feasible point.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A numerical kernel failed to produce a usable result.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Broken internal invariant; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
