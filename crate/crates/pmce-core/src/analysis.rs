//! Closed-form performance expressions and the capacity metric.
//!
//! The central quantity is the channel-estimation MSE summed over beams and
//! subcarriers, E Σ_{d,k} |b̂_d[k] − b_d[k]|². For the LS pipeline it admits
//! a closed form driven by the per-path captured energies
//! Tr{U_sᴴR_{s,l}U_s}: a sinc-shaped loss from the delay mismatch plus the
//! N₀·L·D noise floor. A small-error quadratic expansion turns the sinc loss
//! into the (quantization + estimation) error variance, and replacing the
//! captured energy by its maximum M gives a worst-case bound. The genie MMSE
//! bound follows from the eigenvalues of the effective-CFR covariance.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::amp_est::EffectiveCovariance;
use crate::channel::{SpatialCovariance, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_desc, hermitian_sqrt, hermitize};
use crate::scalar::{from64, fromcount, to64, Scalar};

/// Inputs to the closed-form MSE expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryInputs<T: Scalar> {
    /// Per-path captured energy Tr{U_sᴴ·R_{s,l}·U_s} (nonnegative).
    pub traces: Vec<T>,
    /// Total captured energy Tr{U_sᴴ·R_s·U_s} = Σ_l traces[l].
    pub trace_total: T,
    /// System parameters.
    pub params: SystemParams<T>,
    /// Quantizer bit budget B.
    pub bits: u32,
    /// Delay estimation-error variance σ².
    pub sigma2: T,
    /// Per-path realized delay errors τ̂_l − τ_l, required by [`mse_exact`].
    pub delay_errors: Option<Vec<T>>,
}

impl<T: Scalar> TheoryInputs<T> {
    /// Compute the captured energies from an eigenbeam basis and the spatial
    /// covariance.
    pub fn from_beams(
        u_s: &DMatrix<Complex<T>>,
        spatial: &SpatialCovariance<T>,
        params: &SystemParams<T>,
        bits: u32,
        sigma2: T,
    ) -> Self {
        let traces: Vec<T> = spatial
            .per_path
            .iter()
            .map(|r| (u_s.adjoint() * r * u_s).trace().re)
            .collect();
        let trace_total = traces.iter().fold(T::zero(), |a, &b| a + b);
        TheoryInputs {
            traces,
            trace_total,
            params: *params,
            bits,
            sigma2,
            delay_errors: None,
        }
    }

    /// Attach realized per-path delay errors (enables [`mse_exact`]).
    pub fn with_delay_errors(mut self, errors: Vec<T>) -> Self {
        self.delay_errors = Some(errors);
        self
    }

    /// Check the structural invariants (consistency of the traces).
    pub fn validate(&self) -> Result<()> {
        if self.traces.iter().any(|&t| t < T::zero()) {
            return Err(Error::InvalidParams(
                "captured energies must be nonnegative".into(),
            ));
        }
        let sum = self.traces.iter().fold(T::zero(), |a, &b| a + b);
        let tol = from64::<T>(1e-9) * T::one().max(self.trace_total.abs());
        if (sum - self.trace_total).abs() > tol {
            return Err(Error::InvalidParams(format!(
                "trace_total {} disagrees with the per-path sum {}",
                to64(self.trace_total),
                to64(sum)
            )));
        }
        Ok(())
    }
}

/// Per-trial empirical MSE: Σ_{d,k} |b̂_d[k] − b_d[k]|² (the expectation is
/// realized by trial averaging in the harness).
pub fn mse_empirical<T: Scalar>(
    b_hat: &DMatrix<Complex<T>>,
    b: &DMatrix<Complex<T>>,
) -> Result<T> {
    if b_hat.shape() != b.shape() {
        return Err(Error::InvalidParams(format!(
            "shape mismatch: estimate {:?} vs truth {:?}",
            b_hat.shape(),
            b.shape()
        )));
    }
    Ok(b_hat
        .iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (e, t)| acc + (e - t).norm_sqr()))
}

/// Exact closed-form MSE for realized delay errors:
///
/// ```text
/// K·Σ_l Tr{U_sᴴR_{s,l}U_s}·(1 − sinc²(π(τ̂_l−τ_l)K/T)) + N0·L·D.
/// ```
pub fn mse_exact<T: Scalar>(inputs: &TheoryInputs<T>) -> Result<T> {
    let errors = inputs.delay_errors.as_ref().ok_or_else(|| {
        Error::InvalidParams("mse_exact needs realized delay errors".into())
    })?;
    if errors.len() != inputs.traces.len() {
        return Err(Error::InvalidParams(format!(
            "{} delay errors for {} paths",
            errors.len(),
            inputs.traces.len()
        )));
    }
    let p = &inputs.params;
    let kf = fromcount::<T>(p.k);
    let t = p.t();
    let mut loss = T::zero();
    for (&trace, &err) in inputs.traces.iter().zip(errors) {
        let x = T::pi() * err * kf / t;
        let s = sinc(x);
        loss += trace * (T::one() - s * s);
    }
    Ok(kf * loss + noise_floor(p))
}

/// Small-error closed-form MSE:
///
/// ```text
/// (π²K³/(3T²))·Tr{U_sᴴR_sU_s}·(τ_max²/(12·4^B) + σ²) + N0·L·D.
/// ```
pub fn mse_approx<T: Scalar>(inputs: &TheoryInputs<T>) -> T {
    let p = &inputs.params;
    mse_approx_with_trace(p, inputs.trace_total, inputs.bits, inputs.sigma2)
}

/// Worst-case bound: [`mse_approx`] with the captured energy replaced by its
/// maximum Tr{U_sᴴR_sU_s} ≤ M.
pub fn mse_worst_case<T: Scalar>(params: &SystemParams<T>, bits: u32, sigma2: T) -> T {
    mse_approx_with_trace(params, fromcount(params.m), bits, sigma2)
}

fn mse_approx_with_trace<T: Scalar>(
    params: &SystemParams<T>,
    trace_total: T,
    bits: u32,
    sigma2: T,
) -> T {
    let kf = fromcount::<T>(params.k);
    let t = params.t();
    let three = fromcount::<T>(3);
    let lead = T::pi() * T::pi() * kf * kf * kf / (three * t * t);
    lead * trace_total * (quant_error_variance(params.tau_max, bits) + sigma2)
        + noise_floor(params)
}

/// Variance of the B-bit quantization error: Δ²/12 = τ_max²/(12·4^B).
pub fn quant_error_variance<T: Scalar>(tau_max: T, bits: u32) -> T {
    let four_b = from64::<T>(4.0).powi(bits as i32);
    tau_max * tau_max / (fromcount::<T>(12) * four_b)
}

/// The residual-noise MSE floor N0·L·D.
pub fn noise_floor<T: Scalar>(params: &SystemParams<T>) -> T {
    params.n0 * fromcount(params.l * params.d)
}

/// Significant eigenvalues of the effective-CFR covariance R_b, computed in
/// factored form.
///
/// R_b = (I⊗S)·R_β·(I⊗Sᴴ) shares its nonzero spectrum with the Hermitian
/// (D·L)×(D·L) matrix W·R_β·W, W = I_D ⊗ (SᴴS)^{1/2}. When the steering
/// columns are orthogonal (delays on the T/K grid) this reduces to K·eig(R_β).
/// Returned descending; tiny negative round-off values are clamped to zero.
pub fn rb_eigenvalues<T: Scalar>(cov: &EffectiveCovariance<T>) -> Result<Vec<T>> {
    let l = cov.s.ncols();
    let dl = cov.r_beta.nrows();
    let d = dl / l;
    let gram = hermitize(&(cov.s.adjoint() * &cov.s));
    let g_half = hermitian_sqrt(&gram)?;
    // W·R_β·W with W = I_D ⊗ G^{1/2}, assembled blockwise.
    let mut scaled = DMatrix::zeros(dl, dl);
    for d1 in 0..d {
        for d2 in 0..d {
            let block = cov.r_beta.view((d1 * l, d2 * l), (l, l));
            let prod = &g_half * block * &g_half;
            scaled.view_mut((d1 * l, d2 * l), (l, l)).copy_from(&prod);
        }
    }
    let (vals, _) = hermitian_eigen_desc(&hermitize(&scaled))?;
    Ok(vals
        .into_iter()
        .map(|v| if v > T::zero() { v } else { T::zero() })
        .collect())
}

/// Genie MMSE bound: N0·Σ_i λ_b[i]/(λ_b[i] + N0) over the D·L significant
/// eigenvalues of R_b. Always below the LS floor N0·L·D.
pub fn mmse_theoretical<T: Scalar>(lambda_b: &[T], n0: T) -> T {
    lambda_b.iter().fold(T::zero(), |acc, &l| {
        let l = l.max(T::zero());
        acc + n0 * l / (l + n0)
    })
}

/// Downlink spectral efficiency of per-subcarrier matched beamforming on the
/// estimated effective channel:
///
/// ```text
/// v[k] = b̂[k]*/‖b̂[k]‖,   C = (1/K)·Σ_k log₂(1 + |b[k]ᵀv[k]|²/N0),
/// ```
///
/// in bits/s/Hz. A zero estimated column transmits nothing on that
/// subcarrier and contributes log₂(1) = 0.
pub fn capacity<T: Scalar>(
    b_true: &DMatrix<Complex<T>>,
    b_est: &DMatrix<Complex<T>>,
    n0: T,
) -> Result<T> {
    if b_true.shape() != b_est.shape() {
        return Err(Error::InvalidParams(format!(
            "shape mismatch: truth {:?} vs estimate {:?}",
            b_true.shape(),
            b_est.shape()
        )));
    }
    if !(n0 > T::zero()) {
        return Err(Error::InvalidParams(
            "capacity needs a positive noise variance".into(),
        ));
    }
    let (d, k) = b_true.shape();
    let mut acc = T::zero();
    for ki in 0..k {
        let norm_sqr = b_est
            .column(ki)
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr());
        if norm_sqr == T::zero() {
            continue;
        }
        let mut inner = Complex::new(T::zero(), T::zero());
        for di in 0..d {
            inner += b_true[(di, ki)] * b_est[(di, ki)].conj();
        }
        let gain = inner.norm_sqr() / norm_sqr;
        acc += (T::one() + gain / n0).ln() / T::ln_2();
    }
    Ok(acc / fromcount(k))
}

/// sin(x)/x with sinc(0) = 1 (the large-K limit of the Dirichlet kernel).
pub fn sinc<T: Scalar>(x: T) -> T {
    if x == T::zero() {
        T::one()
    } else {
        x.sin() / x
    }
}

/// Absolute error of the quadratic sinc expansion used by [`mse_approx`]:
/// |sinc(x) − (1 − x²/6)| at x = π·delay_error·K/T. Bounds the regime where
/// the small-error formula is trustworthy.
pub fn sinc_approx_error<T: Scalar>(delay_error: T, k: usize, t: T) -> T {
    let x = T::pi() * delay_error * fromcount::<T>(k) / t;
    let six = fromcount::<T>(6);
    (sinc(x) - (T::one() - x * x / six)).abs()
}
