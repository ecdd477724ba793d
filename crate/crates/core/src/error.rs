use thiserror::Error;

/// Errors raised by state construction, the physical primitives and the
/// protocol pipelines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("all amplitudes vanish")]
    ZeroVector,
    #[error("bad occupation tuple {tuple:?}: {reason}")]
    BadOccupation { tuple: Vec<u8>, reason: String },
    #[error("mode `{0}` is already registered")]
    DuplicateMode(String),
    #[error("mode `{0}` appears in both operands")]
    ModeCollision(String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("mode `{mode}` has the wrong kind (expected {expected})")]
    KindMismatch { mode: String, expected: &'static str },
    #[error("operation on modes ({0}) needs occupation above the cutoff {1}")]
    CutoffOverflow(String, u8),
    #[error("mode `{0}` holds two or more excitations in some component")]
    QubitViolation(String),
    #[error("cavity `{0}` is not empty")]
    CavityNotEmpty(String),
    #[error("modes ({0}) are not in vacuum")]
    ModesNotVacuum(String),
    #[error("|alpha|^2 + |beta|^2 = {0}, expected 1")]
    NotNormalized(f64),
    #[error("coupling g = 0 has no optimal interaction time")]
    NoOptimum,
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("herald failed: no photon at the dark port")]
    HeraldFailed,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("malformed state serialization at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
