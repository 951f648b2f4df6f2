use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }

    /// Core errors from the eigensolver or quadrature exit 3; anything else
    /// means the inputs were unusable and exits 2.
    pub fn from_core(context: &str, e: ssf_lab_core::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(format!("{context}: {e}"))
        } else {
            CliError::Config(format!("{context}: {e}"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ssf_lab_core::Error;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let e = CliError::from_core("x", Error::QuadratureNonConvergence { previous: 1.0, last: 2.0 });
        assert!(matches!(e, CliError::Numerical(_)));
        assert_eq!(e.exit_code(), ExitCode::from(3));
        let e = CliError::from_core("x", Error::InvalidWeight("w".into()));
        assert_eq!(e.exit_code(), ExitCode::from(2));
    }
}
