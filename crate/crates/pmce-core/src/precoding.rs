//! Inner precoder eigenbasis, effective channel, and random-phase training.
//!
//! The inner precoding stage projects the M-antenna array onto the D
//! dominant eigenbeams of the spatial covariance R_s. Everything downstream
//! sees only the *effective* channel through those beams:
//!
//! ```text
//! β_d[l] = u_sᴴ[d]·α[:,l]          (effective path amplitudes, D×L)
//! b_d[k] = u_sᴴ[d]·h[k] = Σ_l β_d[l]·e^{-j2πk τ_l/T}   (effective CFR, D×K)
//! ```
//!
//! Training sends one OFDM symbol with constant-amplitude, random-phase
//! pilots per beam; the user observes the phase-mixed superposition
//! y[k] = Σ_d e^{jφ_d[k]}·b_d[k] + z[k].

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{steering_matrix, ChannelRealization, MultipathProfile, SpatialCovariance, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_desc, phase_normalize_columns};
use crate::scalar::{cis, from64, fromcount, Scalar};

/// The channel as seen through the D eigenbeams of the inner precoder.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannel<T: Scalar> {
    /// Eigenbeam basis U_s, M×D with orthonormal columns.
    pub u_s: DMatrix<Complex<T>>,
    /// Effective path amplitudes β_d[l], D×L.
    pub beta: DMatrix<Complex<T>>,
    /// Effective CFR b_d[k], D×K.
    pub b: DMatrix<Complex<T>>,
}

/// One training symbol: i.i.d. uniform phases per (beam, subcarrier).
///
/// The implied diagonal matrices A_d = diag(e^{jφ_d[0]}, …, e^{jφ_d[K−1]})
/// are never materialized; [`TrainingBlock::phasor`] exposes their entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingBlock<T: Scalar> {
    /// Pilot phases φ_d[k] in [−π, π), D×K.
    pub phases: DMatrix<T>,
}

impl<T: Scalar> TrainingBlock<T> {
    /// Number of beams D.
    #[inline]
    pub fn n_beams(&self) -> usize {
        self.phases.nrows()
    }

    /// Number of subcarriers K.
    #[inline]
    pub fn n_subcarriers(&self) -> usize {
        self.phases.ncols()
    }

    /// Pilot entry a_d[k] = e^{jφ_d[k]} (unit modulus).
    #[inline]
    pub fn phasor(&self, d: usize, k: usize) -> Complex<T> {
        cis(self.phases[(d, k)])
    }
}

/// Top-D eigenbeams of the total spatial covariance.
///
/// Eigenvalues are sorted descending with a stable sort, so an exactly
/// degenerate spectrum keeps the eigensolver's order (for R_s = I this yields
/// the canonical basis). Each column is phase-rotated so its largest-magnitude
/// entry is real positive, making the basis reproducible across runs;
/// downstream quantities used in analyses (traces, MSE) are invariant to this
/// choice.
pub fn eigenbeams<T: Scalar>(r_s: &SpatialCovariance<T>, d: usize) -> Result<DMatrix<Complex<T>>> {
    let m = r_s.total.nrows();
    if d > m {
        return Err(Error::InvalidParams(format!(
            "cannot extract D = {d} eigenbeams from an M = {m} antenna covariance"
        )));
    }
    let (_, vectors) = hermitian_eigen_desc(&r_s.total)?;
    let mut u_s = vectors.columns(0, d).into_owned();
    phase_normalize_columns(&mut u_s);
    Ok(u_s)
}

/// Project a channel realization onto the eigenbeam basis.
///
/// `beta = U_sᴴ·α` and `b = U_sᴴ·cfr`. In debug builds the Fourier identity
/// `b_d[k] = Σ_l β_d[l]·e^{-j2πk τ_l/T}` is re-derived from `beta` and
/// asserted against `b` entrywise.
pub fn effective_channel<T: Scalar>(
    u_s: &DMatrix<Complex<T>>,
    realization: &ChannelRealization<T>,
    profile: &MultipathProfile<T>,
    params: &SystemParams<T>,
) -> EffectiveChannel<T> {
    assert_eq!(
        u_s.nrows(),
        realization.alpha.nrows(),
        "eigenbeam basis and realization disagree on antenna count"
    );
    let u_h = u_s.adjoint();
    let beta = &u_h * &realization.alpha;
    let b = &u_h * &realization.cfr;

    #[cfg(debug_assertions)]
    {
        let s = steering_matrix(&profile.delays, params.k, params.t())
            .expect("profile delays must lie in [0, T)");
        let b_fourier = &beta * s.transpose();
        let tol = debug_identity_tolerance::<T>();
        let mut worst = T::zero();
        for (lhs, rhs) in b.iter().zip(b_fourier.iter()) {
            let diff = (lhs - rhs).modulus();
            if diff > worst {
                worst = diff;
            }
        }
        debug_assert!(
            worst <= tol,
            "effective CFR disagrees with its Fourier synthesis: max |Δ| = {worst:?}"
        );
    }
    #[cfg(not(debug_assertions))]
    {
        let _ = (profile, params);
    }

    EffectiveChannel { u_s: u_s.clone(), beta, b }
}

#[cfg(debug_assertions)]
fn debug_identity_tolerance<T: Scalar>() -> T {
    // 1e-10 in double precision; proportionally looser for coarser scalars.
    let scaled = fromcount::<T>(1000) * T::default_epsilon();
    let floor = from64(1e-10);
    if scaled > floor {
        scaled
    } else {
        floor
    }
}

/// Draw one random-phase training block: φ_d[k] i.i.d. uniform on [−π, π),
/// beam-major order (all subcarriers of beam 0, then beam 1, …). Draws are
/// taken in `f64` regardless of the working scalar.
pub fn training<T, R>(d: usize, k: usize, rng: &mut R) -> TrainingBlock<T>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    assert!(d >= 1 && k >= 1, "training needs at least one beam and one subcarrier");
    let mut phases = DMatrix::zeros(d, k);
    for di in 0..d {
        for ki in 0..k {
            phases[(di, ki)] = from64((2.0 * rng.random::<f64>() - 1.0) * std::f64::consts::PI);
        }
    }
    TrainingBlock { phases }
}

/// Received training signal: y[k] = Σ_d e^{jφ_d[k]}·b_d[k] + z[k].
///
/// Noise is circular complex Gaussian with variance `n0` per subcarrier,
/// drawn in subcarrier order. The two normal draws per subcarrier are always
/// consumed, even at `n0 = 0`, so a seeded stream stays aligned across noise
/// levels.
pub fn transmit<T, R>(
    train: &TrainingBlock<T>,
    eff: &EffectiveChannel<T>,
    n0: T,
    rng: &mut R,
) -> DVector<Complex<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    let d = train.n_beams();
    let k = train.n_subcarriers();
    assert_eq!(
        (d, k),
        eff.b.shape(),
        "training block and effective channel disagree on (D, K)"
    );
    assert!(n0 >= T::zero(), "noise variance must be nonnegative");
    let scale = (n0 / fromcount(2)).sqrt();
    DVector::from_fn(k, |ki, _| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for di in 0..d {
            acc += train.phasor(di, ki) * eff.b[(di, ki)];
        }
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        acc + Complex::new(scale * from64::<T>(re), scale * from64::<T>(im))
    })
}
