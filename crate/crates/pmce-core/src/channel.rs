//! Physical multipath channel for a half-wavelength uniform linear array.
//!
//! A channel consists of L discrete propagation paths, each with a delay
//! τ_l ∈ [0, τ_max], a power σ_l², and a bundle of N_p unresolvable subpath
//! rays departing at fixed angles. The per-antenna complex amplitude of a path
//! is the sum of its rays,
//!
//! ```text
//! α_m[l] = Σ_i c_{l,i} · e^{-jπ m sin θ_{l,i}},    c_{l,i} ~ CN(0, σ_l²/N_p),
//! ```
//!
//! which makes α Gaussian with the analytic spatial covariance
//! R_{s,l}[m,n] = (σ_l²/N_p)·Σ_i e^{-jπ(m−n) sin θ_{l,i}}. The frequency
//! response on K subcarriers follows by Fourier synthesis over the delays:
//! h_m[k] = Σ_l α_m[l]·e^{-j2πk τ_l/T}.
//!
//! Geometry (delays, angles) is the slow component: it is fixed per profile
//! and shared by uplink and downlink. Ray gains are fast fading: they are
//! redrawn per realization, with uplink gains independent of downlink ones.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{cis, from64, fromcount, to64, Scalar};

/// Redraw budget for profile generation before reporting failure.
pub const DEFAULT_MAX_REDRAWS: usize = 1000;

/// Global system parameters shared by every stage of the pipeline.
///
/// Construct via [`SystemParams::new`], which enforces the cross-field
/// invariants (D ≤ M, K ≥ 2L, τ_max < T). The OFDM symbol duration is not
/// stored: [`SystemParams::t`] returns `1/delta_f` so the identity
/// `T = 1/Δf` holds exactly by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T: Scalar> {
    /// Subcarrier count K.
    pub k: usize,
    /// Subcarrier spacing Δf in Hz.
    pub delta_f: T,
    /// Base-station antenna count M.
    pub m: usize,
    /// Effective channel dimension D (number of eigenbeams / RF chains).
    pub d: usize,
    /// Multipath count L.
    pub l: usize,
    /// Noise variance N₀ on the training observation (linear scale).
    pub n0: T,
    /// Maximum path delay τ_max in seconds.
    pub tau_max: T,
}

impl<T: Scalar> SystemParams<T> {
    /// Validated constructor.
    pub fn new(
        k: usize,
        delta_f: T,
        m: usize,
        d: usize,
        l: usize,
        n0: T,
        tau_max: T,
    ) -> Result<Self> {
        let params = Self {
            k,
            delta_f,
            m,
            d,
            l,
            n0,
            tau_max,
        };
        params.validate()?;
        Ok(params)
    }

    /// Check every documented parameter invariant.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.m == 0 || self.d == 0 || self.l == 0 {
            return Err(Error::InvalidParams(
                "K, M, D, and L must all be at least 1".into(),
            ));
        }
        if self.d > self.m {
            return Err(Error::InvalidParams(format!(
                "effective dimension D = {} exceeds antenna count M = {}",
                self.d, self.m
            )));
        }
        if self.k < 2 * self.l {
            return Err(Error::InvalidParams(format!(
                "K = {} subcarriers cannot separate L = {} paths (need K ≥ 2L)",
                self.k, self.l
            )));
        }
        if !(self.delta_f > T::zero()) {
            return Err(Error::InvalidParams(
                "subcarrier spacing must be positive".into(),
            ));
        }
        if !(self.n0 >= T::zero()) {
            return Err(Error::InvalidParams(
                "noise variance must be nonnegative".into(),
            ));
        }
        if !(self.tau_max > T::zero()) || !(self.tau_max < self.t()) {
            return Err(Error::InvalidParams(format!(
                "tau_max must lie in (0, T); got tau_max = {:.3e} s with T = {:.3e} s",
                to64(self.tau_max),
                to64(self.t())
            )));
        }
        Ok(())
    }

    /// Useful OFDM symbol duration `T = 1/Δf` in seconds (exact).
    #[inline]
    pub fn t(&self) -> T {
        T::one() / self.delta_f
    }

    /// Default minimum delay gap used by profile generation: `T/(2K)`.
    #[inline]
    pub fn default_min_gap(&self) -> T {
        self.t() / (fromcount::<T>(2) * fromcount(self.k))
    }
}

/// Ground-truth physical channel geometry: delays, powers, subpath angles.
///
/// Delays are strictly ascending; downlink and uplink powers each sum to 1.
/// Uplink powers default to the downlink ones (the model never differentiates
/// large-scale statistics between the two directions) but may be overridden
/// via [`MultipathProfile::with_uplink_powers`].
#[derive(Debug, Clone, PartialEq)]
pub struct MultipathProfile<T: Scalar> {
    /// Path delays τ_l in seconds, strictly ascending, within [0, τ_max].
    pub delays: Vec<T>,
    /// Downlink path powers σ_l², normalized to sum 1.
    pub powers: Vec<T>,
    /// Uplink path powers σ̄_l², normalized to sum 1.
    pub powers_ul: Vec<T>,
    /// Per-path departure angles of the N_p subpath rays, in radians.
    pub subpath_angles: Vec<Vec<T>>,
}

impl<T: Scalar> MultipathProfile<T> {
    /// Number of paths L.
    #[inline]
    pub fn n_paths(&self) -> usize {
        self.delays.len()
    }

    /// Replace the uplink powers (validated).
    pub fn with_uplink_powers(mut self, powers_ul: Vec<T>) -> Result<Self> {
        self.powers_ul = powers_ul;
        self.validate()?;
        Ok(self)
    }

    /// Check the structural profile invariants.
    ///
    /// The power-normalization tolerance is 1e-12 in double precision,
    /// loosened proportionally for coarser scalars.
    pub fn validate(&self) -> Result<()> {
        let l = self.n_paths();
        if l == 0 {
            return Err(Error::InvalidParams("profile must have ≥ 1 path".into()));
        }
        if self.powers.len() != l || self.powers_ul.len() != l || self.subpath_angles.len() != l {
            return Err(Error::InvalidParams(format!(
                "profile field lengths disagree: {} delays, {} powers, {} uplink powers, {} angle sets",
                l,
                self.powers.len(),
                self.powers_ul.len(),
                self.subpath_angles.len()
            )));
        }
        for w in self.delays.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParams(
                    "delays must be strictly ascending".into(),
                ));
            }
        }
        if self.delays.iter().any(|&d| d < T::zero()) {
            return Err(Error::InvalidParams("delays must be nonnegative".into()));
        }
        let tol = self.power_tolerance();
        for (name, powers) in [("downlink", &self.powers), ("uplink", &self.powers_ul)] {
            if powers.iter().any(|&p| p < T::zero()) {
                return Err(Error::InvalidParams(format!(
                    "{name} powers must be nonnegative"
                )));
            }
            let sum = powers.iter().fold(T::zero(), |a, &b| a + b);
            if (sum - T::one()).abs() > tol {
                return Err(Error::InvalidParams(format!(
                    "{name} powers must sum to 1, got {:.15}",
                    to64(sum)
                )));
            }
        }
        if self.subpath_angles.iter().any(|a| a.is_empty()) {
            return Err(Error::InvalidParams(
                "every path needs at least one subpath angle".into(),
            ));
        }
        Ok(())
    }

    fn power_tolerance(&self) -> T {
        let scaled = fromcount::<T>(100 * self.n_paths()) * T::default_epsilon();
        let floor = from64(1e-12);
        if scaled > floor {
            scaled
        } else {
            floor
        }
    }
}

/// One fast-fading draw: per-antenna path amplitudes and the derived CFRs.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T: Scalar> {
    /// Downlink path amplitudes α_m[l], M×L.
    pub alpha: DMatrix<Complex<T>>,
    /// Uplink path amplitudes ᾱ_m[l], M×L (independent gains, same geometry).
    pub alpha_ul: DMatrix<Complex<T>>,
    /// Downlink CFR h_m[k], M×K.
    pub cfr: DMatrix<Complex<T>>,
    /// Uplink CFR h̄_m[k], M×K.
    pub cfr_ul: DMatrix<Complex<T>>,
}

/// Per-path and total spatial covariance of the array response.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialCovariance<T: Scalar> {
    /// R_{s,l}, one Hermitian M×M matrix per path; Tr{R_{s,l}} = M·σ_l².
    pub per_path: Vec<DMatrix<Complex<T>>>,
    /// R_s = Σ_l R_{s,l}.
    pub total: DMatrix<Complex<T>>,
}

/// Draw a random multipath profile with the default redraw budget and the
/// default minimum delay gap `T/(2K)`.
///
/// Delays are uniform on [0, τ_max], redrawn as a block until all pairwise
/// gaps reach the minimum; powers follow an exponential decay profile
/// σ_l² ∝ e^{-τ_l/decay} normalized to sum 1 (uplink powers equal downlink);
/// each path gets a central angle uniform on [−π, π), an angular spread
/// uniform on [0, π/2], and `n_subpaths` ray angles uniform within the spread.
pub fn make_profile<T, R>(
    params: &SystemParams<T>,
    decay: T,
    n_subpaths: usize,
    rng: &mut R,
) -> Result<MultipathProfile<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    make_profile_with(params, decay, n_subpaths, None, DEFAULT_MAX_REDRAWS, rng)
}

/// [`make_profile`] with explicit minimum delay gap and redraw budget.
///
/// `min_gap = None` selects the default `T/(2K)`. Draw order is fixed —
/// delays (whole blocks, including rejected attempts), then per-path angle
/// triples (center, spread, subpaths) — so a seeded stream always produces
/// the same profile. All draws are taken in `f64` regardless of `T`.
pub fn make_profile_with<T, R>(
    params: &SystemParams<T>,
    decay: T,
    n_subpaths: usize,
    min_gap: Option<T>,
    max_redraws: usize,
    rng: &mut R,
) -> Result<MultipathProfile<T>>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    params.validate()?;
    if !(decay > T::zero()) {
        return Err(Error::InvalidParams("power decay must be positive".into()));
    }
    if n_subpaths == 0 {
        return Err(Error::InvalidParams(
            "paths need at least one subpath".into(),
        ));
    }
    let min_gap = to64(min_gap.unwrap_or_else(|| params.default_min_gap()));
    let tau_max = to64(params.tau_max);
    let l = params.l;

    let mut delays64 = vec![0.0f64; l];
    let mut accepted = false;
    for _ in 0..=max_redraws {
        for d in delays64.iter_mut() {
            *d = rng.random::<f64>() * tau_max;
        }
        delays64.sort_by(|a, b| a.partial_cmp(b).expect("delay draws are finite"));
        if delays64.windows(2).all(|w| w[1] - w[0] >= min_gap) {
            accepted = true;
            break;
        }
    }
    if !accepted {
        return Err(Error::ProfileGeneration(format!(
            "no delay block with pairwise gaps ≥ {:.3e} s found in {} redraws \
             (L = {}, tau_max = {:.3e} s)",
            min_gap, max_redraws, l, tau_max
        )));
    }

    let delays: Vec<T> = delays64.iter().map(|&d| from64(d)).collect();
    let mut powers: Vec<T> = delays.iter().map(|&d| (-d / decay).exp()).collect();
    let total = powers.iter().fold(T::zero(), |a, &b| a + b);
    for p in powers.iter_mut() {
        *p /= total;
    }
    let powers_ul = powers.clone();

    let mut subpath_angles = Vec::with_capacity(l);
    for _ in 0..l {
        let center = (2.0 * rng.random::<f64>() - 1.0) * std::f64::consts::PI;
        let spread = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
        let lo = center - spread / 2.0;
        let angles: Vec<T> = (0..n_subpaths)
            .map(|_| from64(lo + rng.random::<f64>() * spread))
            .collect();
        subpath_angles.push(angles);
    }

    let profile = MultipathProfile {
        delays,
        powers,
        powers_ul,
        subpath_angles,
    };
    profile.validate()?;
    Ok(profile)
}

/// Analytic spatial covariance of the ray model on an M-antenna ULA.
///
/// R_{s,l}[m,n] = (σ_l²/N_p)·Σ_i e^{-jπ(m−n) sin θ_{l,i}}. The matrices are
/// Hermitian Toeplitz by construction (built from the correlation sequence),
/// so Tr{R_{s,l}} = M·σ_l² holds exactly.
pub fn spatial_covariance<T: Scalar>(
    profile: &MultipathProfile<T>,
    m: usize,
) -> SpatialCovariance<T> {
    let mut per_path = Vec::with_capacity(profile.n_paths());
    for (power, angles) in profile.powers.iter().zip(&profile.subpath_angles) {
        let weight = Complex::new(*power / fromcount(angles.len()), T::zero());
        // correlation sequence over antenna offsets 0..M-1
        let corr: Vec<Complex<T>> = (0..m)
            .map(|offset| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &theta in angles {
                    acc += cis(-T::pi() * fromcount::<T>(offset) * theta.sin());
                }
                acc * weight
            })
            .collect();
        per_path.push(DMatrix::from_fn(m, m, |p, q| {
            if p >= q {
                corr[p - q]
            } else {
                corr[q - p].conj()
            }
        }));
    }
    let mut total = DMatrix::zeros(m, m);
    for mat in &per_path {
        total += mat;
    }
    SpatialCovariance { per_path, total }
}

/// Draw one fast-fading realization of the channel.
///
/// Ray gains are i.i.d. circular complex Gaussian with variance σ_l²/N_p,
/// drawn in path-major order — all downlink gains first, then all uplink
/// gains — so the consumed stream is a fixed function of (L, N_p). Uplink
/// shares the delays and angles (geometry reciprocity) with independent
/// gains. CFRs are synthesized as `α · Sᵀ` with S the steering matrix of the
/// profile delays.
///
/// Panics if the profile delays fall outside [0, T); [`MultipathProfile`]
/// values produced by [`make_profile`] always satisfy this.
pub fn realize<T, R>(
    profile: &MultipathProfile<T>,
    params: &SystemParams<T>,
    rng: &mut R,
) -> ChannelRealization<T>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    let m = params.m;
    let gains_dl = draw_ray_gains(&profile.powers, &profile.subpath_angles, rng);
    let gains_ul = draw_ray_gains(&profile.powers_ul, &profile.subpath_angles, rng);
    let alpha = synthesize_alpha(&gains_dl, &profile.subpath_angles, m);
    let alpha_ul = synthesize_alpha(&gains_ul, &profile.subpath_angles, m);

    let s = steering_matrix(&profile.delays, params.k, params.t())
        .expect("profile delays must lie in [0, T)");
    let s_t = s.transpose();
    let cfr = &alpha * &s_t;
    let cfr_ul = &alpha_ul * &s_t;
    ChannelRealization {
        alpha,
        alpha_ul,
        cfr,
        cfr_ul,
    }
}

/// Draw i.i.d. CN(0, σ_l²/N_p) gains for every (path, subpath) pair.
fn draw_ray_gains<T, R>(powers: &[T], subpath_angles: &[Vec<T>], rng: &mut R) -> Vec<Vec<Complex<T>>>
where
    T: Scalar,
    R: Rng + ?Sized,
{
    powers
        .iter()
        .zip(subpath_angles)
        .map(|(&power, angles)| {
            let scale = (to64(power) / (2.0 * angles.len() as f64)).sqrt();
            (0..angles.len())
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex::new(from64(scale * re), from64(scale * im))
                })
                .collect()
        })
        .collect()
}

/// α_m[l] = Σ_i c_{l,i}·e^{-jπ m sin θ_{l,i}} for all antennas and paths.
fn synthesize_alpha<T: Scalar>(
    gains: &[Vec<Complex<T>>],
    subpath_angles: &[Vec<T>],
    m: usize,
) -> DMatrix<Complex<T>> {
    DMatrix::from_fn(m, gains.len(), |mi, li| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&c, &theta) in gains[li].iter().zip(&subpath_angles[li]) {
            acc += c * cis(-T::pi() * fromcount::<T>(mi) * theta.sin());
        }
        acc
    })
}

/// Frequency-domain steering vector: entry k is `e^{-j2πk·τ/T}`.
pub fn steering_vector<T: Scalar>(tau: T, k: usize, t: T) -> Result<DVector<Complex<T>>> {
    if !(tau >= T::zero() && tau < t) {
        return Err(Error::Domain(format!(
            "steering delay {:.6e} s outside [0, {:.6e})",
            to64(tau),
            to64(t)
        )));
    }
    let step = -T::two_pi() * tau / t;
    Ok(DVector::from_fn(k, |ki, _| cis(step * fromcount(ki))))
}

/// K×L steering matrix with columns `s(τ_l)`.
pub fn steering_matrix<T: Scalar>(delays: &[T], k: usize, t: T) -> Result<DMatrix<Complex<T>>> {
    let mut s = DMatrix::zeros(k, delays.len());
    for (li, &tau) in delays.iter().enumerate() {
        s.set_column(li, &steering_vector(tau, k, t)?);
    }
    Ok(s)
}

/// Exact normalized steering-vector correlation (Dirichlet kernel):
///
/// ```text
/// (1/K)·sᴴ(τ+Δτ)·s(τ) = e^{jπ(K−1)Δτ/T} · sin(πKΔτ/T) / (K·sin(πΔτ/T)),
/// ```
///
/// equal to 1 whenever Δτ is a multiple of T. Its magnitude is ≤ 1, with
/// zeros at the off-grid multiples of T/K; the familiar sinc expression is
/// the K → ∞ limit of this kernel.
pub fn dirichlet<T: Scalar>(delta_tau: T, k: usize, t: T) -> Complex<T> {
    let x = T::pi() * delta_tau / t;
    let sin_x = x.sin();
    if sin_x == T::zero() {
        return Complex::new(T::one(), T::zero());
    }
    let kf = fromcount::<T>(k);
    let magnitude = (kf * x).sin() / (kf * sin_x);
    cis((kf - T::one()) * x) * Complex::new(magnitude, T::zero())
}
