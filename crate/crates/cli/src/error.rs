use std::fmt;

use fga_core::Error;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, spec strings or degree/truncation choices. Exit code 2.
    Usage(String),
    /// Anything that went wrong while computing. Exit code 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidParameters(_)
            | Error::InvalidRank { .. }
            | Error::BeyondTruncation { .. }
            | Error::OutOfRange { .. }
            | Error::TypeDOnly
            | Error::AxiomViolation(_)
            | Error::Io(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}
