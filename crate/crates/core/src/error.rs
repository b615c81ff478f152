use thiserror::Error;

/// Errors raised by the arithmetic and class group routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("discriminant mismatch: {left} vs {right}")]
    DiscriminantMismatch { left: String, right: String },

    #[error("prime {prime} is not represented by a primitive form of discriminant {disc}")]
    NotRepresentable { disc: String, prime: u64 },

    #[error("scale limit: {0}")]
    ScaleLimit(String),

    #[error("class number certification failed: {0}")]
    CertificationFailure(String),

    #[error("exponent {exponent} does not annihilate the form")]
    InvalidExponent { exponent: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the size of the input rather than its validity.
    pub fn is_scale(&self) -> bool {
        matches!(self, Error::ScaleLimit(_) | Error::CertificationFailure(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
