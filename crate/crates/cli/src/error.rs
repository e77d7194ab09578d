use std::process::ExitCode;

use fermient::FermiError;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unparseable or invalid input. Exit code 2.
    User(String),
    /// Hilbert space larger than the configured cap. Exit code 3.
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::User(_) => ExitCode::from(2),
            CliError::Cap(_) => ExitCode::from(3),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::User(msg) | CliError::Cap(msg) => f.write_str(msg),
        }
    }
}

impl From<FermiError> for CliError {
    fn from(e: FermiError) -> Self {
        match e {
            FermiError::DimensionCapExceeded { .. } => CliError::Cap(e.to_string()),
            other => CliError::User(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::User(e.to_string())
    }
}
