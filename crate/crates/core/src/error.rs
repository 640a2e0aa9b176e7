//! Error type shared by the whole crate.

use crate::integrate::EnergyResult;

/// Crate-wide error type.
///
/// Domain errors come from evaluating a formula outside its region of
/// validity (contact singularities, regulator poles). Overlap errors come
/// from geometric validation. `NotConverged` carries the best estimate the
/// integrator produced before running out of budget.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("bodies touch or overlap: {0}")]
    Overlap(String),

    #[error(
        "integration did not converge: error estimate {achieved:.3e} exceeds requested {requested:.3e} after {} evaluations",
        result.evaluations
    )]
    NotConverged {
        /// Best estimate available when the budget ran out.
        result: EnergyResult,
        requested: f64,
        achieved: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
