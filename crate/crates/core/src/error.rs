use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside its documented domain. `field` names the
    /// offending parameter.
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    /// The source cannot support the protocol (no squeezed-state entanglement,
    /// or no sub-shot-noise channel to key on).
    #[error("session refused: {0}")]
    SessionRefused(String),

    #[error("calibration failed: {0}")]
    CalibrationFailed(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field,
            reason: reason.into(),
        }
    }
}
