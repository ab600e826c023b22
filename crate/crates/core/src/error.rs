use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An index product or power does not fit in 64 bits.
    #[error("index overflow: {0}")]
    Overflow(String),

    /// The integrand returned NaN or an infinity at a quadrature node.
    #[error("non-finite integrand value {value} at sigma = {sigma}")]
    NonFinite { sigma: f64, value: f64 },

    /// A prime rank was requested for a prime beyond the sieve ceiling.
    #[error("prime {0} lies beyond the prime table ceiling")]
    PrimeLimit(u64),

    /// Malformed series data (bad index ordering, zero index, non-finite values).
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    /// The requested inner norm cannot be computed by the chosen method.
    #[error("inner norm method not available: {0}")]
    InnerMethod(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
