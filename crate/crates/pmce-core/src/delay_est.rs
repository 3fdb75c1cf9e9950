//! Base-station delay estimation, quantization, and feedforward.
//!
//! The BS estimates the L path delays from uplink CFR snapshots: the
//! frequency-domain covariance averaged over antennas has a signal subspace
//! spanned by the steering vectors of the true delays, and its shift
//! invariance yields the delays through LS-ESPRIT. Estimates (or synthetic
//! surrogates with a prescribed error variance σ²) are quantized by a B-bit
//! mid-rise uniform quantizer on [0, τ_max] and the indices are fed forward
//! to the user over an error-free link.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{realize, MultipathProfile, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::{complex_eigenvalues, hermitian_eigen_desc, lstsq_qr_multi};
use crate::scalar::{from64, fromcount, to64, Scalar};

/// Everything the delay stage produces for one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayReport<T: Scalar> {
    /// Ground-truth delays, ascending.
    pub true_delays: Vec<T>,
    /// Estimated delays τ̃_l, sorted ascending (matched to truth by order).
    pub est_delays: Vec<T>,
    /// Quantizer bin indices, one per estimated delay.
    pub quant_indices: Vec<u32>,
    /// Reconstruction levels τ̂_l = (index + ½)·Δ.
    pub quant_delays: Vec<T>,
    /// Bits per delay.
    pub bits: u32,
    /// Estimation-error variance s² (configured or measured).
    pub sigma2_est: T,
    /// True when any ESPRIT rotation eigenvalue strayed far off the unit
    /// circle (estimate should not be trusted).
    pub unreliable: bool,
}

impl<T: Scalar> DelayReport<T> {
    /// Assemble a report: sorts the estimates (nearest-neighbor matching of
    /// two ascending lists is the identity pairing), quantizes each, and
    /// records the metadata.
    pub fn build(
        true_delays: &[T],
        mut est_delays: Vec<T>,
        bits: u32,
        tau_max: T,
        sigma2_est: T,
        unreliable: bool,
    ) -> Self {
        est_delays.sort_by(|a, b| a.partial_cmp(b).expect("delays are finite"));
        let (quant_indices, quant_delays) = est_delays
            .iter()
            .map(|&tau| quantize(tau, bits, tau_max))
            .unzip();
        DelayReport {
            true_delays: true_delays.to_vec(),
            est_delays,
            quant_indices,
            quant_delays,
            bits,
            sigma2_est,
            unreliable,
        }
    }

    /// Matched per-path estimation errors τ̃_l − τ_l.
    pub fn est_errors(&self) -> Vec<T> {
        self.est_delays
            .iter()
            .zip(&self.true_delays)
            .map(|(&e, &t)| e - t)
            .collect()
    }

    /// Matched per-path quantized-delay errors τ̂_l − τ_l.
    pub fn quant_errors(&self) -> Vec<T> {
        self.quant_delays
            .iter()
            .zip(&self.true_delays)
            .map(|(&q, &t)| q - t)
            .collect()
    }
}

/// Frequency-domain covariance averaged over antennas:
/// R̃_f = (1/M)·Σ_m h̄_m h̄_mᴴ, with h̄_m the m-th uplink CFR row as a column.
///
/// Entry (k, p) is (1/M)·Σ_m H[m,k]·H[m,p]*, which the expression below
/// produces as `(Hᵀ·H*)/M`; the result is exactly Hermitian.
pub fn freq_covariance<T: Scalar>(cfr_ul: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
    let m = cfr_ul.nrows();
    assert!(m >= 1, "need at least one antenna row");
    let scale = Complex::new(T::one() / fromcount(m), T::zero());
    (cfr_ul.transpose() * cfr_ul.conjugate()) * scale
}

/// LS-ESPRIT delay recovery from a frequency covariance.
///
/// Takes the L dominant eigenvectors E_s of R_f, solves the shift-invariance
/// system E₁Ψ ≈ E₂ (E₁ drops the last row, E₂ the first) by least squares,
/// and reads each delay off an eigenvalue of Ψ as τ = −∠λ·T/(2π), mapped
/// into [0, T). Returns the sorted delays and a flag that is `true` when any
/// |λ| strays from the unit circle by more than 0.5 (unreliable estimate).
pub fn esprit<T: Scalar>(
    r_f: &DMatrix<Complex<T>>,
    l: usize,
    t: T,
) -> Result<(Vec<T>, bool)> {
    let k = r_f.nrows();
    if l == 0 || l + 1 > k {
        return Err(Error::InvalidParams(format!(
            "cannot extract L = {l} delays from a {k}×{k} covariance"
        )));
    }
    let (_, vectors) = hermitian_eigen_desc(r_f)?;
    let e_s = vectors.columns(0, l);
    let e1 = e_s.rows(0, k - 1).into_owned();
    let e2 = e_s.rows(1, k - 1).into_owned();
    let psi = lstsq_qr_multi(&e1, &e2, None)?;
    let eigenvalues = complex_eigenvalues(&psi)?;

    let mut unreliable = false;
    let half = from64::<T>(0.5);
    let mut delays: Vec<T> = eigenvalues
        .iter()
        .map(|lambda| {
            if (lambda.modulus() - T::one()).abs() > half {
                unreliable = true;
            }
            let mut tau = -lambda.argument() * t / T::two_pi();
            if tau < T::zero() {
                tau += t;
            }
            tau
        })
        .collect();
    delays.sort_by(|a, b| a.partial_cmp(b).expect("delays are finite"));
    Ok((delays, unreliable))
}

/// Synthetic delay estimates: τ̃_l = τ_l + e_l with e_l i.i.d. N(0, σ²),
/// clamped into [0, τ_max].
///
/// One Gaussian draw is consumed per path even at σ² = 0 (where the result
/// is exactly the truth), keeping seeded streams aligned across σ² sweeps.
pub fn synth_estimate<T, R>(true_delays: &[T], sigma2: T, tau_max: T, rng: &mut R) -> Vec<T>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    assert!(sigma2 >= T::zero(), "error variance must be nonnegative");
    let sd = to64(sigma2).sqrt();
    true_delays
        .iter()
        .map(|&tau| {
            let e: f64 = rng.sample(StandardNormal);
            let noisy = tau + from64::<T>(sd * e);
            noisy.max(T::zero()).min(tau_max)
        })
        .collect()
}

/// B-bit mid-rise uniform quantizer on [0, τ_max].
///
/// Δ = τ_max/2^B; the input is clamped into range, the bin index is
/// ⌊τ/Δ⌋ capped at 2^B − 1, and the reconstruction level is the bin center
/// (index + ½)·Δ. In-range inputs give |τ̂ − τ| ≤ Δ/2.
pub fn quantize<T: Scalar>(tau: T, bits: u32, tau_max: T) -> (u32, T) {
    assert!(bits >= 1 && bits <= 31, "bit budget must be in 1..=31");
    let levels = 1u32 << bits;
    let delta = tau_max / fromcount(levels as usize);
    let clamped = tau.max(T::zero()).min(tau_max);
    let raw = to64(clamped / delta).floor() as u32;
    let index = raw.min(levels - 1);
    (index, dequantize(index, bits, tau_max))
}

/// Reconstruction level of a quantizer bin: τ̂ = (index + ½)·Δ.
pub fn dequantize<T: Scalar>(index: u32, bits: u32, tau_max: T) -> T {
    let levels = 1u32 << bits;
    let delta = tau_max / fromcount(levels as usize);
    (fromcount::<T>(index as usize) + from64(0.5)) * delta
}

/// Error-free feedforward of quantizer indices (identity seam; an impaired
/// link model can be substituted here).
pub fn feedforward(indices: &[u32]) -> Vec<u32> {
    indices.to_vec()
}

/// Empirical ESPRIT error variance on a fixed profile.
///
/// Runs realize → freq_covariance → esprit `n_trials` times and returns the
/// mean over paths and trials of the squared matched-delay error, together
/// with the number of trials flagged unreliable. Estimates beyond T/2 are
/// folded down by one period (wrap-around of the delay circle) and clamped
/// into [0, τ_max] before sorting and matching, mirroring how a receiver
/// with a known delay-spread bound would read them.
///
/// `uplink_snr_db = None` keeps the uplink CFRs noiseless; otherwise
/// circular complex Gaussian noise at the given SNR (unit signal power) is
/// added entrywise.
pub fn measure_sigma2<T, R>(
    params: &SystemParams<T>,
    profile: &MultipathProfile<T>,
    n_trials: usize,
    uplink_snr_db: Option<T>,
    rng: &mut R,
) -> Result<(T, usize)>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    if n_trials < 100 {
        return Err(Error::InvalidParams(format!(
            "sigma2 measurement needs ≥ 100 trials, got {n_trials}"
        )));
    }
    params.validate()?;
    profile.validate()?;
    let t = params.t();
    let half_t = t / fromcount(2);
    let l = profile.n_paths();
    let noise_sd = uplink_snr_db.map(|snr| (10.0f64.powf(-to64(snr) / 10.0) / 2.0).sqrt());

    let mut acc = 0.0f64;
    let mut n_unreliable = 0usize;
    for _ in 0..n_trials {
        let mut realization = realize(profile, params, rng);
        if let Some(sd) = noise_sd {
            for z in realization.cfr_ul.iter_mut() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *z += Complex::new(from64::<T>(sd * re), from64::<T>(sd * im));
            }
        }
        let r_f = freq_covariance(&realization.cfr_ul);
        let (raw, unreliable) = esprit(&r_f, l, t)?;
        if unreliable {
            n_unreliable += 1;
        }
        let mut est: Vec<T> = raw
            .into_iter()
            .map(|tau| {
                let folded = if tau > half_t { tau - t } else { tau };
                folded.max(T::zero()).min(params.tau_max)
            })
            .collect();
        est.sort_by(|a, b| a.partial_cmp(b).expect("delays are finite"));
        let trial_mse: f64 = est
            .iter()
            .zip(&profile.delays)
            .map(|(&e, &tr)| {
                let d = to64(e) - to64(tr);
                d * d
            })
            .sum::<f64>()
            / l as f64;
        acc += trial_mse;
    }
    Ok((from64(acc / n_trials as f64), n_unreliable))
}
