//! Error type shared by every module.

use thiserror::Error;

/// Failure modes reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Non-finite or malformed input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Parameters outside the admissible domain.
    #[error("parameter outside admissible domain: {0}")]
    ParameterDomain(String),
    /// An iterative procedure hit its cap before meeting the requested tolerance.
    #[error("no convergence in {what} (best error bound {best_bound:e})")]
    Convergence { what: String, best_bound: f64 },
    /// The error estimate exceeds the size of the quantity being computed.
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    /// Evaluation point too close to a pole of a ratio.
    #[error("point {z} lies within {distance:e} of a pole")]
    PoleProximity { z: f64, distance: f64 },
    /// A zero seed could not be bracketed by a certified sign change.
    #[error("could not bracket zero near {seed}: {reason}")]
    Seeding { seed: f64, reason: String },
    /// Argument outside the range where the routine is validated.
    #[error("argument outside validated range: {0}")]
    OutOfRange(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for convergence-type failures, as opposed to bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. }
                | Error::PrecisionLoss(_)
                | Error::PoleProximity { .. }
                | Error::Seeding { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {x}")))
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("tolerance must be positive and finite, got {tol}")))
    }
}
