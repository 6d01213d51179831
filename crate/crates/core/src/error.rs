use thiserror::Error;

/// Errors raised by the algebra routines.
///
/// Precision problems (`InsufficientTruncation`) are kept apart from
/// structural ones so front ends can report them differently.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("insufficient truncation: degree {required} requested but only {available} is known")]
    InsufficientTruncation { required: u32, available: u32 },

    #[error("divisor {index} is the zero series")]
    ZeroDivisor { index: usize },

    #[error("division needs at least one divisor")]
    EmptyDivisorList,

    #[error("map component {component} has a nonzero constant term")]
    ConstantTerm { component: usize },

    #[error("the linear part of the map is singular")]
    SingularLinearPart,

    #[error("chain is not increasing at position {index}")]
    NotIncreasing { index: usize },

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by missing precision rather than malformed input.
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientTruncation { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
