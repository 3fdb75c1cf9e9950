//! Parametric downlink channel estimation for FDD massive MIMO with cascaded
//! precoding.
//!
//! The crate models an OFDM downlink where a base station with an M-antenna
//! uniform linear array serves a single user through a two-stage precoder. The
//! slow inner stage projects onto the top-D eigenbeams of the spatial
//! covariance; the resulting D-dimensional *effective* channel is frequency
//! selective through L multipath delays shared by uplink and downlink. The BS
//! estimates the delays from uplink snapshots (frequency-domain ESPRIT),
//! quantizes them onto a B-bit grid, and feeds the indices forward; the user
//! then recovers the effective complex amplitudes by least squares on one
//! random-phase training symbol and regenerates the full effective CFR.
//!
//! Modules follow the processing chain:
//!
//! * [`channel`] — multipath profiles, spatial covariance, channel realizations,
//!   steering vectors.
//! * [`precoding`] — eigenbeam basis, effective channel, random-phase training,
//!   received signal.
//! * [`delay_est`] — frequency covariance, ESPRIT, synthetic delay errors,
//!   quantization and feedforward.
//! * [`amp_est`] — delay merging, LS design matrix and solve, CFR regeneration,
//!   effective covariance and the genie MMSE baseline.
//! * [`analysis`] — closed-form MSE expressions, the MMSE bound, and the
//!   beamforming capacity metric.
//!
//! All numerics are generic over the real scalar via [`Scalar`] (`f32` or
//! `f64`); the [`Real`]/[`Cplx`] aliases fix the default double-precision
//! instantiation used by the simulation harness.

pub mod amp_est;
pub mod analysis;
pub mod channel;
pub mod delay_est;
pub mod error;
pub mod linalg;
pub mod precoding;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

use num_complex::Complex;

/// Default real scalar for concrete instantiations.
pub type Real = f64;
/// Default complex scalar.
pub type Cplx = Complex<f64>;

/// Single-precision variants, available for memory-bound experiments.
pub type Real32 = f32;
pub type Cplx32 = Complex<f32>;

/// System parameters at the default precision.
pub type SystemParams = channel::SystemParams<Real>;
/// Multipath profile at the default precision.
pub type MultipathProfile = channel::MultipathProfile<Real>;
/// Spatial covariance at the default precision.
pub type SpatialCovariance = channel::SpatialCovariance<Real>;
/// Channel realization at the default precision.
pub type ChannelRealization = channel::ChannelRealization<Real>;
/// Effective channel at the default precision.
pub type EffectiveChannel = precoding::EffectiveChannel<Real>;
/// Training block at the default precision.
pub type TrainingBlock = precoding::TrainingBlock<Real>;
/// Delay report at the default precision.
pub type DelayReport = delay_est::DelayReport<Real>;
/// Design matrix at the default precision.
pub type DesignMatrix = amp_est::DesignMatrix<Real>;
/// Effective covariance at the default precision.
pub type EffectiveCovariance = amp_est::EffectiveCovariance<Real>;
/// Theory inputs at the default precision.
pub type TheoryInputs = analysis::TheoryInputs<Real>;
