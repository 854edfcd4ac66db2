use thiserror::Error;

/// Errors raised by curveforge operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A point fell outside the domain component of a function.
    #[error("t = {t} outside domain {domain}")]
    Domain { t: f64, domain: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid input: {0}")]
    Input(String),

    /// Adaptive quadrature or an iterative solve did not meet its tolerance.
    #[error("no convergence: {what} (achieved estimate {achieved:e})")]
    Convergence { what: String, achieved: f64 },

    /// A square-root argument vanished: the solution sits at a turning point.
    #[error("turning point at value {value}")]
    TurningPoint { value: f64 },

    /// A monotone inversion was asked for a value the branch never reaches.
    #[error("out of range: {0}")]
    Range(String),

    /// Every grid point was skipped or otherwise unusable.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The alpha = -1 law has a logarithmic energy integral; its dual is never a power law.
    #[error("logarithmic case alpha = -1 has no power-law dual")]
    LogarithmicCase,

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(t: f64, domain: impl std::fmt::Display) -> Self {
        Error::Domain {
            t,
            domain: domain.to_string(),
        }
    }

    /// True for errors caused by bad user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_) | Error::Input(_) | Error::Unsupported(_) | Error::LogarithmicCase
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
