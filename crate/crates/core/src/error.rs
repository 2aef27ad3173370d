use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("localization error: {0}")]
    Localization(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pole of the Gamma function at {0}")]
    Pole(String),
    #[error("divergent quantity: {0}")]
    Divergence(String),
    #[error("no discrete eigenvalue: {0}")]
    NoEigenvalue(String),
    #[error("no soliton found: {0}")]
    NoSoliton(String),
    #[error("unstable evolution at step {step} (t = {time}): relative mass drift {drift:.3e}")]
    Stability { step: usize, time: f64, drift: f64 },
    #[error("frame {frame} (t = {time}): {source}")]
    InFrame { frame: usize, time: f64, source: Box<Error> },
    #[error("config error: {0}")]
    Config(String),
    #[error("csv error: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line tool: 1 for bad input, 2
    /// for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) | Error::Csv(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            kind => Error::Csv(format!("{kind:?}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
