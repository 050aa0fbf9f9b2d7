use thiserror::Error;

/// Errors raised by the library. Internal consistency failures are reported as
/// [`AcafError::Structural`] instead of panicking so that the CLI can surface them as failed checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcafError {
    #[error("invalid dimension n = {n}: {reason}")]
    InvalidDimension { n: usize, reason: String },
    #[error("slot {slot} has the wrong variance for {op}")]
    VarianceMismatch { slot: usize, op: &'static str },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("structural failure: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, AcafError>;

/// Rejects odd or too small dimensions.
pub fn check_dim(n: usize, min: usize) -> Result<()> {
    if n % 2 != 0 || n < min {
        return Err(AcafError::InvalidDimension { n, reason: format!("must be even and at least {min}") });
    }
    if n > crate::poly::MAX_VARS {
        return Err(AcafError::InvalidDimension {
            n,
            reason: format!("chart polynomials support at most {} variables", crate::poly::MAX_VARS),
        });
    }
    Ok(())
}
