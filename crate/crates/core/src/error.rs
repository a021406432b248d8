use thiserror::Error;

/// Errors raised by the numerical and exact routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: String, domain: &'static str },

    #[error("pole of the gamma function at {0}")]
    Pole(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalue solver failed: {0}")]
    EigenSolver(String),

    #[error("matrix is numerically singular or ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("spectrum is not real: {0}")]
    NonReal(String),

    #[error("integrand does not decay fast enough for the quadrature rule: {0}")]
    SlowDecay(String),

    #[error("accuracy not validated for argument {0}")]
    OutsideValidatedRange(f64),

    #[error("identity check `{id}` failed: {detail}")]
    CheckFailed { id: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(value: impl ToString, domain: &'static str) -> Self {
        Error::Domain {
            value: value.to_string(),
            domain,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
