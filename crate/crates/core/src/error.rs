use thiserror::Error;

/// Errors raised by the numerical core and the model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GsError {
    #[error("domain error: {what} = {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("moment of order {order} does not exist for alpha = {alpha}")]
    MomentDiverges { order: f64, alpha: f64 },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T, E = GsError> = std::result::Result<T, E>;

pub(crate) fn check_finite(x: f64, what: &'static str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(GsError::NonFinite(what))
    }
}
