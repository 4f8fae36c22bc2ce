use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at t = {t}")]
    NonFinite { t: f64 },

    #[error("family denominator vanishes at t = {t}")]
    SingularTime { t: f64 },

    #[error("radicand of α crosses zero at t = {times:?}")]
    SingularDenominator { times: Vec<f64> },

    #[error("α vanishes at t = {times:?}")]
    DivisionBySingularAlpha { times: Vec<f64> },

    #[error("ODE coefficient singular at t = {times:?}")]
    SingularCoefficient { times: Vec<f64> },

    #[error("integration state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("consistency check failed: {0}")]
    CheckFailed(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the numerics (singular window, blow-up)
    /// rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. }
                | Error::SingularTime { .. }
                | Error::SingularDenominator { .. }
                | Error::DivisionBySingularAlpha { .. }
                | Error::SingularCoefficient { .. }
                | Error::NonFiniteState { .. }
                | Error::CheckFailed(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
