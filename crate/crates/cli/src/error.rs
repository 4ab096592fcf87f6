use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] sarima_core::Error),

    #[error("cannot read {}: {source}", path.display())]
    Input { path: PathBuf, source: std::io::Error },

    #[error("cannot write {}: {message}", path.display())]
    Output { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => EXIT_USAGE,
            CliError::Input { .. } => EXIT_DATA,
            CliError::Core(e) if e.is_data_error() => EXIT_DATA,
            CliError::Core(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Core(_) => EXIT_USAGE,
        }
    }

    pub(crate) fn output(path: impl Into<PathBuf>, e: impl ToString) -> Self {
        CliError::Output {
            path: path.into(),
            message: e.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sarima_core::{Error, Period};

    #[test]
    fn codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::from(Error::Gap(Period::new(2019, 2))).exit_code(), EXIT_DATA);
        assert_eq!(CliError::from(Error::AllFitsFailed(3)).exit_code(), EXIT_NUMERICAL);
        assert_eq!(CliError::from(Error::InvalidOrder("m".into())).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::from(Error::OutOfSpan(Period::new(2030, 1))).exit_code(), EXIT_USAGE);
    }
}
