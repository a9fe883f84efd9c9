use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },
    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported dimension {0}: expected one of 2, 3, 5, 7")]
    UnsupportedDim(u64),
    #[error("Pauli label (0|0) has no nondegenerate eigenbasis")]
    ZeroLabel,
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("vector is not an eigenvector (residual {0:e})")]
    NotEigenvector(f64),
    #[error("facet index has length {got}, expected {full} (full) or {edge} (edge)")]
    BadLength { got: usize, full: usize, edge: usize },
    #[error("facet index component {0} out of range")]
    BadComponent(u32),
    #[error("channel is not trace preserving (max deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("output did not fit the expected form (residual {0:e})")]
    ConvergenceFailure(f64),
    #[error("linear program is numerically unstable: {0}")]
    NumericalInstability(String),
    #[error("runtime budget exceeded: {0}")]
    RuntimeBudgetExceeded(String),
    #[error("missing configuration: {0}")]
    MissingConfig(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
