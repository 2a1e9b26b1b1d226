//! Error type shared by all modules.

use crate::tower::Tower;
use std::fmt;

/// Errors produced by the exact-arithmetic and curve machinery.
///
/// `Split` is not a failure: it signals that a zero divisor was hit in a
/// dynamically built extension tower and carries the two refined towers.
/// Drivers catch it and re-run the computation in a component (see
/// [`crate::tower::resolve_splits`] and the CLI pipeline).
#[derive(Clone)]
pub enum Error {
    /// A precondition on the mathematical input was violated.
    InvalidInput(String),
    /// The input polynomial is not reduced (repeated factors).
    NotReduced(String),
    /// The requested truncation order is too shallow to decide the result.
    NeedDepth { suggested: u32, what: String },
    /// Zero-divisor split: the computation must be re-run over one of the
    /// two refined towers. `zero_part` is the component where the offending
    /// element vanishes, `unit_part` the one where it is invertible.
    Split { zero_part: Tower, unit_part: Tower },
    /// Internal consistency failure (e.g. the cross-checked intersection
    /// paths disagree). Always a bug or an unmet documented assumption.
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::NotReduced(m) => write!(f, "input not reduced: {m}"),
            Error::NeedDepth { suggested, what } => {
                write!(f, "truncation too shallow for {what}; need order >= {suggested}")
            }
            Error::Split { .. } => write!(f, "zero divisor split (should be handled by the driver)"),
            Error::Internal(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

impl fmt::Debug for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::error::Error for Error {}
