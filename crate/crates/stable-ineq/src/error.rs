//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Gamma function evaluated at a pole (zero or a negative integer).
    #[error("gamma pole at x = {0}")]
    GammaPole(f64),

    /// Stability index outside the admissible band (1 + guard, 2 - guard).
    #[error("stability index alpha = {0} outside the admissible range")]
    InvalidAlpha(f64),

    /// Argument outside an operation's domain (e.g. Green function inside the killed set).
    #[error("{0}")]
    Domain(String),

    /// Parameter combination makes the reference measure non-integrable.
    #[error("non-integrable weight: {0}")]
    NonIntegrable(String),

    /// The reversible measure has infinite total mass.
    #[error("infinite total mass")]
    InfiniteMass,

    /// An integral diverges (detected by tail-exponent analysis or bracket failure).
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// A function is not a member of the Orlicz space (no finite gauge bracket).
    #[error("function is not in the Orlicz space")]
    NotInOrliczSpace,

    /// A rejected parameter value.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A rate construction requires the super-Poincaré criterion to hold.
    #[error("super-Poincaré criterion does not hold: {0}")]
    CriterionFails(String),

    /// Weight / N-function specification string could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
