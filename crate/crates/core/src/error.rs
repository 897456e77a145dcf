use thiserror::Error;

/// Errors raised by the spacing computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpacingError {
    /// A parameter is outside the range where the quantity is defined.
    #[error("invalid parameter {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    /// The conditioning event has probability zero.
    #[error("conditioning event |S'| > {i} has probability zero")]
    Conditioning { i: usize },

    /// Exact enumeration was asked for a grid that is too large.
    #[error("enumeration requires n <= {max}, got n = {n}")]
    Size { n: usize, max: usize },

    /// A statistic needs more observations than it was given.
    #[error("need at least {needed} observations, got {got}")]
    SampleSize { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, SpacingError>;

impl SpacingError {
    pub(crate) fn domain(name: &'static str, value: impl ToString, reason: &'static str) -> Self {
        SpacingError::Domain {
            name,
            value: value.to_string(),
            reason,
        }
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(SpacingError::domain("p", p, "survival probability must lie in (0, 1]"))
    }
}
