use thiserror::Error;

/// Errors raised by the model, the special functions and the numerical oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The quadratic dispersion relation has a negative discriminant.
    #[error("complex energy: discriminant {discriminant:e} < 0 (parameters outside the physical regime)")]
    ComplexEnergy { discriminant: f64 },

    /// Both the E^2 and E coefficients vanish; no energy can be solved for.
    #[error("degenerate dispersion relation: alpha = 0 and beta = 0")]
    DegenerateDispersion,

    #[error("domain error in {function}: {reason}")]
    Domain { function: &'static str, reason: String },

    #[error("root finder did not converge: {0}")]
    Convergence(String),

    /// The charge density factor vanishes, so the mode cannot be normalized to +/-1.
    #[error("zero charge density: {condition} vanishes")]
    ZeroDensity { condition: &'static str },

    #[error("grid too coarse: estimated error {estimated_error:e} of level {level} exceeds 1% of gap {gap:e}")]
    GridTooCoarse {
        level: usize,
        estimated_error: f64,
        gap: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
