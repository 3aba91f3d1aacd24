use thiserror::Error;

/// Errors raised by the solvers, problem generators and the linear algebra
/// backend.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("G_1 > C*delta^eps still fails after {doublings} doublings of alpha0 (last alpha0 = {last_alpha0:e})")]
    AssumptionFailure { doublings: u32, last_alpha0: f64 },

    #[error(
        "Newton iteration did not converge for any of {attempts} halvings of the initial parameter"
    )]
    ConvergenceFailure { attempts: u32 },

    #[error("no positive root: ||f_delta|| = {data_norm:e} does not exceed C*delta = {target:e}")]
    NoRoot { data_norm: f64, target: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
