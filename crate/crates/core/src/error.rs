use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |m - m^H| entry {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |u u^H - I| entry {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("not a density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("amplitudes not normalized: |alpha|^2 + |beta|^2 = {norm}")]
    NotNormalized { norm: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("correlation operator has nonzero partial trace (norm {norm:.3e})")]
    NonzeroPartialTrace { norm: f64 },

    #[error("map is not completely positive (Choi min eigenvalue {min_eigenvalue:.6e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
