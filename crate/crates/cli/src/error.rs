//! Errors and the exit-code contract.

use std::process::ExitCode;

use nncalc::NNError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] NNError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    /// A verification finished and found a failure.
    #[error("{0}")]
    CheckFailed(String),
    /// The command ran but its iteration did not converge.
    #[error("{0}")]
    NotConverged(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_CHECK: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_QUADRATURE: u8 = 4;
pub const EXIT_WELL_POSEDNESS: u8 = 5;
pub const EXIT_NON_CONVERGENCE: u8 = 6;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Lib(e) => match e {
                NNError::Syntax { .. }
                | NNError::UnknownIdentifier { .. }
                | NNError::Input(_)
                | NNError::InvalidParameter(_) => EXIT_PARSE,
                NNError::Range(_) | NNError::DivisionByOne | NNError::Domain(_) => EXIT_DOMAIN,
                NNError::Quadrature { .. } => EXIT_QUADRATURE,
                NNError::WellPosedness(_) => EXIT_WELL_POSEDNESS,
                NNError::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
            },
            CliError::Io(_) | CliError::Csv(_) => EXIT_PARSE,
            CliError::CheckFailed(_) => EXIT_CHECK,
            CliError::NotConverged(_) => EXIT_NON_CONVERGENCE,
        }
    }
}
