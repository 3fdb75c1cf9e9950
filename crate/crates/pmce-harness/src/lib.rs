//! Monte-Carlo experiment harness for the parametric channel estimation library.
//!
//! The harness turns the generic building blocks of `pmce-core` into seeded,
//! reproducible experiments: it parses plain-text configuration files, derives
//! independent random streams for every (profile, realization) pair, sweeps one
//! experiment axis (quantizer bits, feedback error variance, or SNR), and emits
//! the results as CSV with a fixed column layout.
//!
//! Reproducibility contract: a sweep is a pure function of `(config, seed)`.
//! Random streams are derived from counters, never shared mutable state, and
//! every cross-trial reduction uses a fixed pairwise summation tree, so the
//! emitted CSV is byte-identical regardless of how many worker threads run the
//! trials.  Sweep points reuse the same per-trial streams (common random
//! numbers), which makes paired comparisons across points far tighter than the
//! raw standard errors suggest.

pub mod acceptance;
pub mod config;
pub mod report;
pub mod streams;
pub mod sweep;

pub use config::{DelaySource, Estimators, ExperimentConfig, SweepAxis};
pub use report::{emit_csv, MseReport, PointRow, CSV_HEADER};
pub use sweep::{run_point, run_sweep};

/// Errors produced by the harness layer (configuration, I/O, or propagated
/// numerical failures from the core library).
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Configuration file is malformed or fails validation.
    #[error("configuration error: {0}")]
    Config(String),

    /// File I/O failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// Path involved in the failed operation.
        path: String,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },

    /// A numerical error propagated from the core library.
    #[error(transparent)]
    Core(#[from] pmce_core::Error),
}

/// Convenient result alias for harness operations.
pub type Result<T> = std::result::Result<T, HarnessError>;
