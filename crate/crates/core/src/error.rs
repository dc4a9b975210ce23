use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three families that the CLI maps to distinct exit
/// codes: bad input, a broken mathematical invariant, and numeric precision
/// exhaustion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is divisible by 1+i")]
    NotOdd(String),
    #[error("{0} is not coprime to the modulus {1}")]
    NotCoprime(String, String),
    #[error("exact division failed, remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("value too large for desk-scale arithmetic: {0}")]
    TooLarge(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("evaluation too close to a pole: {0}")]
    PoleProximity(String),
    #[error("rounding to Gaussian integers unstable up to {bits} bits")]
    RoundingUnstable { bits: u32 },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the math.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Parse { .. }
                | Error::DivisionByZero
                | Error::NotOdd(_)
                | Error::NotCoprime(..)
                | Error::TooLarge(_)
        )
    }

    pub fn is_precision_error(&self) -> bool {
        matches!(
            self,
            Error::PrecisionLoss(_) | Error::PoleProximity(_) | Error::RoundingUnstable { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
