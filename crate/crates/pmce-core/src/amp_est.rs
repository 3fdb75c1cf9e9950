//! User-side amplitude recovery and the genie MMSE baseline.
//!
//! Given the quantized delays fed forward by the BS, the user knows the
//! deterministic structure of the training observation: with S the steering
//! matrix of the (merged) delays and A_d the diagonal pilot matrices, the
//! stacked model is y = X𝛃 + z with X = [A_0S, …, A_{D−1}S]. The effective
//! amplitudes are recovered by least squares through an orthogonal
//! factorization, and the effective CFR is regenerated by Fourier synthesis.
//!
//! Delays closer than the steering resolution T/K are numerically
//! indistinguishable in X; they are merged into a single representative
//! before the solve so the system stays well conditioned.
//!
//! The module also houses the genie MMSE estimator: the conditional mean of
//! the effective CFR given the true second-order statistics and true delays,
//! solved in a factored form so only (D·L)×(D·L) systems appear.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::channel::{steering_matrix, SpatialCovariance, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::lstsq_qr;
use crate::precoding::TrainingBlock;
use crate::scalar::{fromcount, to64, Scalar};

/// The stacked training design matrix X = [A_0S, …, A_{D−1}S].
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T: Scalar> {
    /// K×(D·L′) matrix; column d·L′+l has entries e^{jφ_d[k]}·e^{-j2πk τ_l/T}.
    pub x: DMatrix<Complex<T>>,
    /// Delays the columns were built from (length L′).
    pub delays: Vec<T>,
    /// Original-path → merged-column index map (length L, identity when no
    /// merging happened).
    pub merged_map: Vec<usize>,
}

/// Second-order statistics of the effective channel in factored form.
///
/// The full covariance R_b = (I⊗S)·R_β·(I⊗Sᴴ) is (D·K)×(D·K) but has rank
/// at most D·L, so it is carried as the pair (R_β, S).
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCovariance<T: Scalar> {
    /// R_β, Hermitian (D·L)×(D·L); the (d1, d2) block is the diagonal matrix
    /// diag_l(u_{d1}ᴴ·R_{s,l}·u_{d2}).
    pub r_beta: DMatrix<Complex<T>>,
    /// Steering matrix S of the path delays, K×L.
    pub s: DMatrix<Complex<T>>,
}

/// Cluster quantized delays whose pairwise gap falls below T/(η·K).
///
/// Clustering is the transitive closure of the pairwise condition (on a
/// sorted axis this reduces to chaining adjacent gaps); each cluster is
/// replaced by the plain mean of its members. Returns the merged delays
/// (ascending) and the map from original indices to merged columns. The
/// resulting design matrix is expected to satisfy the downstream condition
/// cap; [`ls_amplitudes`] still verifies it.
pub fn merge_delays<T: Scalar>(
    quant_delays: &[T],
    k: usize,
    t: T,
    eta: T,
) -> (Vec<T>, Vec<usize>) {
    assert!(eta > T::zero(), "merge threshold scale must be positive");
    let n = quant_delays.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let threshold = t / (eta * fromcount(k));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        quant_delays[a]
            .partial_cmp(&quant_delays[b])
            .expect("delays are finite")
    });

    let mut merged = Vec::new();
    let mut map = vec![0usize; n];
    let mut cluster: Vec<usize> = vec![order[0]];
    let flush = |cluster: &mut Vec<usize>, merged: &mut Vec<T>, map: &mut Vec<usize>| {
        let sum = cluster
            .iter()
            .fold(T::zero(), |acc, &i| acc + quant_delays[i]);
        let mean = sum / fromcount(cluster.len());
        for &i in cluster.iter() {
            map[i] = merged.len();
        }
        merged.push(mean);
        cluster.clear();
    };
    for &idx in &order[1..] {
        let prev = *cluster.last().expect("cluster is never empty");
        if quant_delays[idx] - quant_delays[prev] < threshold {
            cluster.push(idx);
        } else {
            flush(&mut cluster, &mut merged, &mut map);
            cluster.push(idx);
        }
    }
    flush(&mut cluster, &mut merged, &mut map);
    (merged, map)
}

/// Assemble X = [A_0S, …, A_{D−1}S] from a training block and (merged)
/// delays. Every entry is unit modulus, so each column has norm √K and the
/// Gram (1/K)XᴴX has a unit diagonal.
pub fn build_design_matrix<T: Scalar>(
    training: &TrainingBlock<T>,
    delays: &[T],
    params: &SystemParams<T>,
) -> Result<DesignMatrix<T>> {
    let d = training.n_beams();
    let k = training.n_subcarriers();
    if k != params.k {
        return Err(Error::InvalidParams(format!(
            "training block has {k} subcarriers, system expects {}",
            params.k
        )));
    }
    let s = steering_matrix(delays, k, params.t())?;
    let lp = delays.len();
    let mut x = DMatrix::zeros(k, d * lp);
    for di in 0..d {
        for li in 0..lp {
            let col = di * lp + li;
            for ki in 0..k {
                x[(ki, col)] = training.phasor(di, ki) * s[(ki, li)];
            }
        }
    }
    Ok(DesignMatrix {
        x,
        delays: delays.to_vec(),
        merged_map: (0..lp).collect(),
    })
}

/// LS estimate of the stacked effective amplitudes:
/// β̂ = argmin ‖y − X̂β‖², solved by Householder QR (never the normal
/// equations). `cond_cap` bounds the estimated condition number of the Gram
/// (1/K)X̂ᴴX̂; beyond it the system is refused, signalling that delay merging
/// failed upstream.
pub fn ls_amplitudes<T: Scalar>(
    design: &DesignMatrix<T>,
    y: &DVector<Complex<T>>,
    cond_cap: T,
) -> Result<DVector<Complex<T>>> {
    match lstsq_qr(&design.x, y, Some(cond_cap.sqrt())) {
        Err(Error::IllConditioned { cond, .. }) => Err(Error::IllConditioned {
            // report in Gram terms: cond(XᴴX) = cond(X)²
            cond: cond * cond,
            cap: to64(cond_cap),
        }),
        other => other,
    }
}

/// Regenerate the effective CFR from estimated amplitudes and delays:
/// b̂_d[k] = Σ_l β̂_d[l]·e^{-j2πk τ̂_l/T}. Returns a D×K matrix.
pub fn regenerate_cfr<T: Scalar>(
    beta_hat: &DVector<Complex<T>>,
    delays: &[T],
    params: &SystemParams<T>,
) -> Result<DMatrix<Complex<T>>> {
    let lp = delays.len();
    if lp == 0 || beta_hat.len() % lp != 0 {
        return Err(Error::InvalidParams(format!(
            "amplitude vector length {} is not a multiple of the delay count {lp}",
            beta_hat.len()
        )));
    }
    let d = beta_hat.len() / lp;
    let s = steering_matrix(delays, params.k, params.t())?;
    let beta_mat = DMatrix::from_fn(d, lp, |di, li| beta_hat[di * lp + li]);
    Ok(beta_mat * s.transpose())
}

/// Effective-channel covariance in factored form.
///
/// The (d1, d2) block of R_β is diagonal with entries u_{d1}ᴴ·R_{s,l}·u_{d2}
/// (cross-path correlations vanish because path gains are independent).
pub fn effective_covariance<T: Scalar>(
    u_s: &DMatrix<Complex<T>>,
    spatial: &SpatialCovariance<T>,
    delays: &[T],
    params: &SystemParams<T>,
) -> Result<EffectiveCovariance<T>> {
    let d = u_s.ncols();
    let l = spatial.per_path.len();
    if delays.len() != l {
        return Err(Error::InvalidParams(format!(
            "covariance has {l} paths but {} delays were supplied",
            delays.len()
        )));
    }
    let s = steering_matrix(delays, params.k, params.t())?;
    let mut r_beta = DMatrix::zeros(d * l, d * l);
    for (li, r_sl) in spatial.per_path.iter().enumerate() {
        let c_l = u_s.adjoint() * r_sl * u_s; // D×D cross-beam correlations
        for d1 in 0..d {
            for d2 in 0..d {
                r_beta[(d1 * l + li, d2 * l + li)] = c_l[(d1, d2)];
            }
        }
    }
    Ok(EffectiveCovariance { r_beta, s })
}

/// Genie MMSE estimate of the effective CFR.
///
/// The conditional mean b̂ = R_bAᴴ(AR_bAᴴ + N0I)⁻¹y collapses, through the
/// factored covariance and the push-through identity, to the (D·L)×(D·L)
/// system
///
/// ```text
/// β̃ = (R_β·XᴴX + N0·I)⁻¹ · R_β·Xᴴy,      b̂_d = S·β̃_d,
/// ```
///
/// with X the exact design matrix of the true delays — no K×K or
/// (D·K)×(D·K) inverse is ever formed.
pub fn mmse_estimate<T: Scalar>(
    y: &DVector<Complex<T>>,
    training: &TrainingBlock<T>,
    cov: &EffectiveCovariance<T>,
    n0: T,
) -> Result<DMatrix<Complex<T>>> {
    if !(n0 > T::zero()) {
        return Err(Error::InvalidParams(
            "MMSE estimation needs a positive noise variance".into(),
        ));
    }
    let d = training.n_beams();
    let k = training.n_subcarriers();
    let l = cov.s.ncols();
    if cov.s.nrows() != k || cov.r_beta.nrows() != d * l || y.len() != k {
        return Err(Error::InvalidParams(
            "training, covariance, and observation dimensions disagree".into(),
        ));
    }

    // X = [A_0S, …, A_{D−1}S] from the factored covariance's steering matrix.
    let mut x = DMatrix::zeros(k, d * l);
    for di in 0..d {
        for li in 0..l {
            let col = di * l + li;
            for ki in 0..k {
                x[(ki, col)] = training.phasor(di, ki) * cov.s[(ki, li)];
            }
        }
    }

    let gram = x.adjoint() * &x;
    let mut system = &cov.r_beta * gram;
    for i in 0..d * l {
        system[(i, i)] += Complex::new(n0, T::zero());
    }
    let rhs = &cov.r_beta * (x.adjoint() * y);
    let beta_tilde = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("factored MMSE system is singular".into()))?;

    let beta_mat = DMatrix::from_fn(d, l, |di, li| beta_tilde[di * l + li]);
    Ok(beta_mat * cov.s.transpose())
}
