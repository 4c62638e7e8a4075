use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two objects that must live on the same measure space do not.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(
        "bisection did not converge after {iterations} iterations; last bracket [{lo:e}, {hi:e}]"
    )]
    NonConvergence { iterations: usize, lo: f64, hi: f64 },
    #[error(
        "aliasing: {points} points per dimension cannot resolve frequency radius {radius} (need at least {})",
        2 * radius + 1
    )]
    Aliasing { points: usize, radius: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for failures of an iterative method rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
