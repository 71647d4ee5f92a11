use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
///
/// The variants map one-to-one onto the CLI exit codes: configuration and
/// contract problems are caller mistakes, domain errors come from evaluating
/// outside a profile's admissible region, and blow-up covers numerical
/// integration that ran into a pole or produced a non-finite value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("domain error at {at}: {reason}")]
    Domain { at: f64, reason: String },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("integration blew up; last valid abscissa {last_valid}")]
    BlowUp { last_valid: f64 },

    #[error("construction rejected: {0}")]
    Construction(String),

    #[error("CFL condition violated: courant number {courant} > 1")]
    Cfl { courant: f64 },

    #[error("non-finite value in time step {step}")]
    NotFinite { step: usize },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn domain(at: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            at,
            reason: reason.into(),
        }
    }
}
