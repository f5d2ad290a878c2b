use alloc::string::String;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two spectra could not be paired label by label.
    #[error("spectrum pairing error: {0}")]
    Pairing(String),
    /// A noise eigenvalue vanishes where the Jacobian has range.
    #[error("singular noise covariance: {0}")]
    SingularNoise(String),
    /// A zero singular value inside the requested truncation.
    #[error("rank deficiency: {0}")]
    Rank(String),
    /// A numerical precondition (e.g. mode-sum truncation) is not met.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Too few samples for a statistical estimate.
    #[error("insufficient samples: {0}")]
    Samples(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::Error::Domain(alloc::format!($($arg)*))
    };
}
pub(crate) use domain;
