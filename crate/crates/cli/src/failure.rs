use std::process::ExitCode;

use acoustic_wave::Error;
use thiserror::Error;

/// Everything that ends a run early, with its exit code.
#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("tolerance failed: {0}")]
    Tolerance(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Library(e) => match e {
                Error::Contract(_) | Error::Construction(_) | Error::Cfl { .. } => 2,
                Error::Domain { .. } | Error::NoRoot(_) => 3,
                Error::BlowUp { .. } | Error::NotFinite { .. } => 5,
            },
            Failure::Tolerance(_) => 4,
        }
    }
}

impl From<&Failure> for ExitCode {
    fn from(f: &Failure) -> Self {
        ExitCode::from(f.exit_code())
    }
}
