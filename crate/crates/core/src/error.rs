use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GceError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GceError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The counter-rotating frequency diverges when a·ω_k reaches 1.
    #[error("degenerate orbit: a*omega_k = {product} (a = {a} s, omega_k = {omega_k} rad/s)")]
    DegenerateOrbit { a: f64, omega_k: f64, product: f64 },

    #[error("no closure period for a zero-energy state")]
    NoClosure,

    #[error("outside model regime: {0}")]
    Regime(String),

    #[error("particle at r = {r} m is inside the source (radius {radius} m)")]
    InsideSource { r: f64, radius: f64 },

    #[error("integration step budget of {max_steps} steps exhausted at t = {t} s")]
    StepBudget { max_steps: usize, t: f64 },

    #[error("trajectory spans {revolutions} revolutions; at least one full revolution is needed")]
    InsufficientSpan { revolutions: f64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GceError {
    fn from(err: std::io::Error) -> Self {
        GceError::Io(err.to_string())
    }
}

impl From<csv::Error> for GceError {
    fn from(err: csv::Error) -> Self {
        GceError::Io(err.to_string())
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(GceError::InvalidInput(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(GceError::InvalidInput(format!(
            "{name} must be finite and > 0, got {value}"
        )))
    }
}
