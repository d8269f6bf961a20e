use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid model: {}", join_violations(.0))]
    InvalidModel(Vec<Violation>),

    #[error("empty coalition has no observability matrix")]
    EmptyCoalition,

    #[error("sensor index {index} out of range for {sensors} sensors")]
    SensorOutOfRange { index: usize, sensors: usize },

    #[error(
        "{sensors} sensors exceeds the exact enumeration cap of {cap}; \
         use the permutation-sampling estimator instead"
    )]
    EnumerationCapExceeded { sensors: usize, cap: usize },

    #[error("enumeration cap {cap} is above the supported maximum of {max}")]
    EnumerationCapTooLarge { cap: usize, max: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,

    #[error("matrix is not symmetric (max deviation {deviation:e}, tolerance {tolerance:e})")]
    Asymmetric { deviation: f64, tolerance: f64 },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("Jacobi eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("coalition size {size} must be below the sensor count {sensors}")]
    InvalidCoalitionSize { size: usize, sensors: usize },

    #[error("sensor count must be positive")]
    NoSensors,

    #[error("number of permutations must be positive")]
    ZeroPermutations,

    #[error("permutation enumeration supports at most {max} sensors, got {sensors}")]
    OracleTooLarge { sensors: usize, max: usize },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
