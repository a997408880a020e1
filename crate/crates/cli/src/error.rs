use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags, config keys or parameter values.
    Usage(String),
    /// A solve that could not be completed.
    Numerical(String),
    /// Output that could not be written.
    Unwritable(String),
    /// Self-test reported failures.
    SelfTest(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Unwritable(_) => 4,
            CliError::SelfTest(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Unwritable(m) => write!(f, "cannot write output: {m}"),
            CliError::SelfTest(n) => write!(f, "{n} self-test check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

/// Domain errors are the caller's fault; everything else is numerical.
impl From<qtunnel::Error> for CliError {
    fn from(e: qtunnel::Error) -> Self {
        match e {
            qtunnel::Error::Domain(m) => CliError::Usage(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
