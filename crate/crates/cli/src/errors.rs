use std::fmt;

/// CLI failure modes with their exit codes: usage 1, parse 2, space
/// mismatch 3, failed self-verification 4.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(String),
    SpaceMismatch(String),
    SelfVerification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::SpaceMismatch(_) => 3,
            CliError::SelfVerification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::SpaceMismatch(msg) => write!(f, "space mismatch: {msg}"),
            CliError::SelfVerification(msg) => write!(f, "self-verification failed: {msg}"),
        }
    }
}

impl From<charkern::Error> for CliError {
    fn from(err: charkern::Error) -> Self {
        match err {
            charkern::Error::SpaceMismatch => CliError::SpaceMismatch(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
