use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("{what} did not converge (achieved error {achieved:.3e})")]
    Numerical { what: String, achieved: f64 },
    #[error("no sign change for {what} on [{lo:.6e}, {hi:.6e}]")]
    NoBracket { what: String, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(what: impl Into<String>, achieved: f64) -> Self {
        Error::Numerical {
            what: what.into(),
            achieved,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
