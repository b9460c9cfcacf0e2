use thiserror::Error;

/// Errors raised by the certified toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function, e.g. the
    /// logarithm of an interval that is not strictly positive.
    #[error("domain error: {0}")]
    Domain(String),

    /// The brute-force enumeration oracle was asked for more than it will count.
    #[error("enumeration budget exceeded: n = {n} > {max}")]
    Budget { n: u64, max: u64 },

    /// Lemma parameters outside the lemma's hypothesis region.
    #[error("hypothesis of {lemma} violated: {detail}")]
    Hypothesis { lemma: &'static str, detail: String },

    /// An operation was called outside the range in which it is defined.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A Lambert W enclosure or a root bracket could not be validated.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Malformed report input.
    #[error("report format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
