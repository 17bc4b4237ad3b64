use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// name the offending input in a user-facing message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("division undefined: {0} is zero")]
    DivisionUndefined(&'static str),

    #[error("infeasible model: {0}")]
    Infeasible(String),

    #[error("insufficient statistics: {0}")]
    InsufficientStatistics(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo_exclusive: f64,
    hi_inclusive: f64,
) -> Result<()> {
    if value.is_finite() && value > lo_exclusive && value <= hi_inclusive {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "out of range",
        })
    }
}
