//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// An interval the adaptive integrator could not refine to tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct BadInterval {
    pub lo: f64,
    pub hi: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the physical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid configuration (grids, step sizes, counts).
    #[error("configuration error: {0}")]
    Config(String),

    /// An analytic spectrum was requested at a point where it diverges.
    #[error("singular point at grid index {index} (omega = {omega}): {reason}")]
    Singular {
        index: usize,
        omega: f64,
        reason: String,
    },

    /// Arithmetic combining spectra with different normalization tags.
    #[error("convention mismatch: {0} vs {1}")]
    ConventionMismatch(String, String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    /// Carries the worst offending intervals for diagnosis.
    #[error(
        "quadrature unconverged: value {value:.6e}, error estimate {error_estimate:.3e} \
         exceeds tolerance {tolerance:.3e} ({} bad intervals)",
        worst.len()
    )]
    Unconverged {
        value: f64,
        error_estimate: f64,
        tolerance: f64,
        worst: Vec<BadInterval>,
    },

    /// The convolution grid does not cover the integrand tail.
    #[error("grid too narrow for self-convolution: estimated truncation {truncation_bound:.3e} of peak")]
    TailCoverage { truncation_bound: f64 },

    /// A Monte Carlo estimate with too large a statistical error.
    #[error("insufficient samples: statistical error {statistical_error:.3e} is {fraction:.1}% of estimate {estimate:.6e}")]
    InsufficientSamples {
        estimate: f64,
        statistical_error: f64,
        fraction: f64,
    },

    /// Peak metrics requested on a spectrum without a usable interior peak.
    #[error("inconclusive peak: {0}")]
    InconclusivePeak(String),
}
