use thiserror::Error;

/// Errors raised by constructions and parsers in this crate.
///
/// Verification never returns these; failed checks are carried in a
/// [`VerificationReport`](crate::verify::VerificationReport).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("non-finite entry {value} at position {index}")]
    NonFiniteEntry { index: usize, value: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },
    #[error("dimension {n} is below the minimum {min}")]
    DimensionTooSmall { n: usize, min: usize },
    #[error("dimension {n} outside supported range {min}..={max}")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a Suleimanova spectrum: {0}")]
    NotSuleimanova(String),
    #[error("spectrum does not have zero trace (s_1 = {0})")]
    NotZeroTrace(f64),
    #[error("Perron condition violated: {0}")]
    PerronViolation(String),
    #[error("necessary condition violated: {0}")]
    NecessaryConditionViolation(String),
    #[error("internal case gap: {0}")]
    InternalCaseGap(String),
    #[error("no available method realizes this spectrum: {0}")]
    NotRealizableByAvailableMethods(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
