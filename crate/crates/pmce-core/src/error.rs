//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by the estimation pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// System or profile parameters violate a documented invariant.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An input lies outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The rejection loop for profile generation exhausted its redraw budget.
    #[error("profile generation failed: {0}")]
    ProfileGeneration(String),

    /// An eigensolver or factorization did not produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A least-squares system exceeded the configured condition cap,
    /// signalling that delay merging failed upstream.
    #[error("ill-conditioned system: condition estimate {cond:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { cond: f64, cap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
