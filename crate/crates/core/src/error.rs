use alloc::string::String;

/// Errors raised by the numerical kernel.
///
/// Every operation validates its domain up front; no function returns NaN for
/// an out-of-domain argument.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{func}: {msg}")]
    Domain { func: &'static str, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("absorption table error: {0}")]
    Table(String),
    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("search error: {0}")]
    Search(String),
    #[error("calibration error: {0}")]
    Calibration(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(func: &'static str, msg: impl Into<String>) -> Error {
    Error::Domain {
        func,
        msg: msg.into(),
    }
}

/// Fails with a domain error unless every value is finite.
pub(crate) fn require_finite(func: &'static str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(domain(func, "non-finite argument"))
    }
}
