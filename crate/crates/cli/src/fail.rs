use std::fmt;
use std::process::ExitCode;

use cd2_core::Error;

/// A failed command, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad usage or configuration (exit 1).
    Config(String),
    /// Unreadable or invalid input data (exit 2).
    Data(String),
    /// Non-finite values during computation (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }

    pub fn invalid_config(errs: Vec<String>) -> Self {
        let mut msg = format!("invalid configuration ({} error{}):", errs.len(), if errs.len() == 1 { "" } else { "s" });
        for e in errs {
            msg.push_str("\n  - ");
            msg.push_str(&e);
        }
        CliError::Config(msg)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Data(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NumericalFailure { .. } => CliError::Numerical(msg),
            Error::InvalidParameter(_) | Error::OverExclusion(_) | Error::EmdCapExceeded { .. } => CliError::Config(msg),
            _ => CliError::Data(msg),
        }
    }
}

pub fn write(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn create_dir(path: &std::path::Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
