use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subset must be nonempty")]
    EmptySubset,

    #[error("index {index} out of range for ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("face enumeration exceeded the cap of {cap} simplices")]
    FaceCapExceeded { cap: usize },

    #[error("ground set of size {size} exceeds the subset-enumeration limit of {limit}")]
    GroundTooLarge { size: usize, limit: usize },

    #[error("central projection requires <v, r> > 0; violated by point {index}")]
    NonPositivePairing { index: usize },

    #[error("player count {n} exceeds the cap of {cap}")]
    PlayerCapExceeded { n: usize, cap: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
