use thiserror::Error;

/// Errors produced anywhere in the simulation stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("hilbert space dimension {dim} exceeds memory guard {max}")]
    MemoryGuard { dim: usize, max: usize },

    #[error("qubit index {index} out of range 1..={n_qubits}")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("operator is not Hermitian (defect {defect:.3e} > tol {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 config, 3 numerical, 4 memory guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MemoryGuard { .. } => 4,
            Error::Config(_)
            | Error::QubitIndex { .. }
            | Error::InvalidState(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            Error::NotHermitian { .. } | Error::NotPositive { .. } | Error::Numerical(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
