use std::fmt;

/// Errors of the std layer. Each maps to one process exit code.
#[derive(Debug)]
pub enum Error {
    /// Bad scenario, flag or parameter (exit 2).
    Config(String),
    /// A numerical routine failed at an identified point (exit 3).
    Numerical {
        context: String,
        source: fso_relay_core::Error,
    },
    /// At least one verification row failed (exit 4).
    Verification {
        failed: usize,
        total: usize,
    },
    Io(std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn numerical(context: impl Into<String>, source: fso_relay_core::Error) -> Self {
        Error::Numerical {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io(_) => 2,
            Error::Numerical { .. } => 3,
            Error::Verification { .. } => 4,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Numerical { context, source } => {
                write!(f, "numerical failure at {context}: {source}")
            }
            Error::Verification { failed, total } => {
                write!(f, "verification failed on {failed} of {total} rows")
            }
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Numerical { source, .. } => Some(source),
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(format!("scenario json: {e}"))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Config(format!("csv: {other:?}")),
        }
    }
}
