use thiserror::Error;

/// Errors raised by the numeric kernel and the layers built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max deviation {deviation:e} exceeds tolerance {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("state vector is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("matrix contains a non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("ensemble has no members")]
    EmptyEnsemble,

    #[error("invalid Kraus map: {0}")]
    InvalidMap(String),

    #[error("instrument is not trace preserving: max deviation of sum K^dag K from identity is {deviation:e}")]
    NotTracePreserving { deviation: f64 },

    #[error("branch {branch} of the instrument is not a PPT map (min Choi eigenvalue {min_eigenvalue:e})")]
    NotPptInstrument { branch: usize, min_eigenvalue: f64 },

    #[error("discarded weight {discarded:e} from zero-probability branches exceeds {limit:e}")]
    WeightLoss { discarded: f64, limit: f64 },

    #[error("branch probabilities sum to {total}, expected 1")]
    ProbabilityDrift { total: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
