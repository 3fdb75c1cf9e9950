//! Seeded Monte-Carlo sweep execution.
//!
//! [`run_point`] evaluates one sweep point: for each multipath profile it
//! builds the spatial covariance, the eigenbeam basis, and the closed-form
//! theory columns once, then runs `n_realizations` independent trials of the
//! full estimation chain (realize → delay estimate → quantize/feed forward →
//! merge → LS amplitudes → CFR regeneration, plus the genie MMSE baseline
//! when enabled). [`run_sweep`] maps `run_point` over the configured values;
//! a point that fails with a propagated numerical error is replaced by a
//! diagnostic row (all result columns empty, `trials = 0`) and reported on
//! stderr, and the sweep continues.
//!
//! Determinism: trials are distributed over the current rayon thread pool,
//! but each trial consumes only its own counter-derived stream and results
//! are collected in trial order, then reduced with a fixed pairwise summation
//! tree. The emitted rows are therefore byte-identical for any thread count.
//!
//! Theory columns under the `esprit` delay source: the σ² entering the
//! small-error closed form is the configured `sigma2_db` (zero when absent) —
//! the harness does not estimate the ESPRIT error variance on the fly. Use
//! `measure-sigma2` to calibrate it and feed the result back in.

use std::time::Instant;

use pmce_core::amp_est::{
    build_design_matrix, effective_covariance, ls_amplitudes, merge_delays, mmse_estimate,
    regenerate_cfr, EffectiveCovariance,
};
use pmce_core::analysis::{
    capacity, mmse_theoretical, mse_approx, mse_empirical, mse_exact, mse_worst_case,
    rb_eigenvalues, TheoryInputs,
};
use pmce_core::channel::{
    make_profile_with, realize, spatial_covariance, MultipathProfile, SystemParams,
};
use pmce_core::delay_est::{dequantize, esprit, feedforward, freq_covariance, synth_estimate, DelayReport};
use pmce_core::precoding::{effective_channel, eigenbeams, training, transmit};
use pmce_core::Cplx;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::config::{snr_db_to_n0, sigma2_db_to_abs, DelaySource, ExperimentConfig, SweepAxis};
use crate::report::{fnv1a, MseReport, PointRow};
use crate::streams::{profile_rng, trial_rng};
use crate::{HarnessError, Result};

/// Operating point after applying one sweep value to the base configuration.
#[derive(Debug, Clone, Copy)]
struct OperatingPoint {
    n0: f64,
    bits: u32,
    sigma2: f64,
}

impl OperatingPoint {
    fn from_config(config: &ExperimentConfig, value: f64) -> Result<Self> {
        let mut point = OperatingPoint {
            n0: snr_db_to_n0(config.snr_db),
            bits: config.bits,
            sigma2: config.sigma2_abs(),
        };
        match config.sweep {
            SweepAxis::Bits => {
                if value.fract() != 0.0 || !(1.0..=31.0).contains(&value) {
                    return Err(HarnessError::Config(format!(
                        "bits sweep value must be an integer in 1..=31, got {value}"
                    )));
                }
                point.bits = value as u32;
            }
            SweepAxis::Sigma2 => point.sigma2 = sigma2_db_to_abs(value, config.tau_max),
            SweepAxis::Snr => point.n0 = snr_db_to_n0(value),
        }
        Ok(point)
    }
}

/// Per-trial results; estimator-specific entries are `None` when disabled.
struct TrialOut {
    mse: Option<f64>,
    exact: Option<f64>,
    cap: Option<f64>,
    mmse: Option<f64>,
}

/// Fixed-tree pairwise summation; a deterministic function of the slice
/// contents alone, independent of how the values were produced.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Mean and standard error of the mean from a sample vector.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Run one Monte-Carlo trial of the full estimation chain.
#[allow(clippy::too_many_arguments)]
fn run_trial(
    config: &ExperimentConfig,
    params: &SystemParams<f64>,
    point: &OperatingPoint,
    profile: &MultipathProfile<f64>,
    u_s: &nalgebra::DMatrix<Cplx>,
    cov: &EffectiveCovariance<f64>,
    theory: &TheoryInputs<f64>,
    profile_idx: usize,
    realization_idx: usize,
) -> pmce_core::Result<TrialOut> {
    let mut rng = trial_rng(config.seed, profile_idx, realization_idx);
    let mut real = realize(profile, params, &mut rng);
    let eff = effective_channel(u_s, &real, profile, params);

    // Delay source. Both branches consume a fixed number of draws per trial,
    // so streams stay aligned across the points of any sweep axis.
    let (est, unreliable) = match config.delay_source {
        DelaySource::Synthetic => (
            synth_estimate(&profile.delays, point.sigma2, params.tau_max, &mut rng),
            false,
        ),
        DelaySource::Esprit => {
            if let Some(snr) = config.uplink_snr_db {
                let sd = (snr_db_to_n0(snr) / 2.0).sqrt();
                for z in real.cfr_ul.iter_mut() {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    *z += Cplx::new(sd * re, sd * im);
                }
            }
            let r_f = freq_covariance(&real.cfr_ul);
            esprit(&r_f, params.l, params.t())?
        }
    };
    let report = DelayReport::build(
        &profile.delays,
        est,
        point.bits,
        params.tau_max,
        point.sigma2,
        unreliable,
    );

    // Feed the quantizer indices forward and rebuild the delay grid exactly
    // as the user terminal would.
    let indices = feedforward(&report.quant_indices);
    let recon: Vec<f64> = indices
        .iter()
        .map(|&i| dequantize(i, point.bits, params.tau_max))
        .collect();
    let (merged, map) = merge_delays(&recon, params.k, params.t(), config.eta);

    let train = training(params.d, params.k, &mut rng);
    let y = transmit(&train, &eff, point.n0, &mut rng);

    let mut out = TrialOut {
        mse: None,
        exact: None,
        cap: None,
        mmse: None,
    };

    if config.estimators.ls_parametric {
        let mut design = build_design_matrix(&train, &merged, params)?;
        design.merged_map = map.clone();
        let beta = ls_amplitudes(&design, &y, config.condition_cap)?;
        let b_hat = regenerate_cfr(&beta, &merged, params)?;
        out.mse = Some(mse_empirical(&b_hat, &eff.b)?);
        out.cap = Some(capacity(&eff.b, &b_hat, point.n0)?);

        // Exact closed form on the delay errors this trial realized; merged
        // paths share their cluster's reconstruction level.
        let errors: Vec<f64> = profile
            .delays
            .iter()
            .enumerate()
            .map(|(l, &tau)| merged[map[l]] - tau)
            .collect();
        let inputs = theory.clone().with_delay_errors(errors);
        out.exact = Some(mse_exact(&inputs)?);
    }

    if config.estimators.mmse_genie {
        let b_mmse = mmse_estimate(&y, &train, cov, point.n0)?;
        out.mmse = Some(mse_empirical(&b_mmse, &eff.b)?);
    }

    Ok(out)
}

/// Evaluate one sweep point.
///
/// Per profile, the covariance, eigenbeams, and theory columns are computed
/// once; trials then run in parallel over the current rayon pool. The row is
/// a pure function of `(config, value)`.
pub fn run_point(config: &ExperimentConfig, value: f64) -> Result<PointRow> {
    config.validate()?;
    let params_base = config.params()?;
    let point = OperatingPoint::from_config(config, value)?;
    let params = SystemParams::new(
        params_base.k,
        params_base.delta_f,
        params_base.m,
        params_base.d,
        params_base.l,
        point.n0,
        params_base.tau_max,
    )?;

    let n_p = config.n_profiles;
    let n_r = config.n_realizations;
    let mut trial_outs: Vec<TrialOut> = Vec::with_capacity(n_p * n_r);
    let mut approx_acc: Vec<f64> = Vec::with_capacity(n_p);
    let mut mmse_theory_acc: Vec<f64> = Vec::with_capacity(n_p);

    for p_idx in 0..n_p {
        let mut rng = profile_rng(config.seed, p_idx);
        let profile = make_profile_with(
            &params,
            config.decay,
            config.n_subpaths,
            config.min_gap,
            config.max_redraws,
            &mut rng,
        )?;
        let spatial = spatial_covariance(&profile, params.m);
        let u_s = eigenbeams(&spatial, params.d)?;
        let cov = effective_covariance(&u_s, &spatial, &profile.delays, &params)?;
        let theory = TheoryInputs::from_beams(&u_s, &spatial, &params, point.bits, point.sigma2);
        theory.validate()?;
        approx_acc.push(mse_approx(&theory));
        mmse_theory_acc.push(mmse_theoretical(&rb_eigenvalues(&cov)?, point.n0));

        let results: Vec<pmce_core::Result<TrialOut>> = (0..n_r)
            .into_par_iter()
            .map(|r_idx| {
                run_trial(
                    config, &params, &point, &profile, &u_s, &cov, &theory, p_idx, r_idx,
                )
            })
            .collect();
        // Surface the first error in trial order so the abort is as
        // deterministic as the successes.
        for res in results {
            trial_outs.push(res?);
        }
    }

    let n = trial_outs.len();
    let mut row = PointRow::diagnostic(config.sweep.token(), value, config.seed);
    row.trials = n;
    row.mse_approx = Some(pairwise_sum(&approx_acc) / n_p as f64);
    row.mse_worst = Some(mse_worst_case(&params, point.bits, point.sigma2));
    row.mmse_theory = Some(pairwise_sum(&mmse_theory_acc) / n_p as f64);

    if config.estimators.ls_parametric {
        let mses: Vec<f64> = trial_outs.iter().map(|t| t.mse.unwrap()).collect();
        let exacts: Vec<f64> = trial_outs.iter().map(|t| t.exact.unwrap()).collect();
        let caps: Vec<f64> = trial_outs.iter().map(|t| t.cap.unwrap()).collect();
        let (mse_mean, mse_se) = mean_se(&mses);
        let (cap_mean, cap_se) = mean_se(&caps);
        row.mse_empirical = Some(mse_mean);
        row.mse_se = Some(mse_se);
        row.mse_exact = Some(pairwise_sum(&exacts) / n as f64);
        row.capacity = Some(cap_mean);
        row.capacity_se = Some(cap_se);
    }
    if config.estimators.mmse_genie {
        let mmses: Vec<f64> = trial_outs.iter().map(|t| t.mmse.unwrap()).collect();
        row.mmse_empirical = Some(pairwise_sum(&mmses) / n as f64);
    }
    Ok(row)
}

/// Run the configured sweep.
///
/// Numerical failures abort the affected point with a diagnostic row (and a
/// note on stderr) without aborting the sweep; configuration errors fail the
/// whole run. An empty value list yields an empty report and success.
pub fn run_sweep(config: &ExperimentConfig) -> Result<MseReport> {
    config.validate()?;
    let start = Instant::now();
    let mut rows = Vec::with_capacity(config.values.len());
    for &value in &config.values {
        match run_point(config, value) {
            Ok(row) => rows.push(row),
            Err(HarnessError::Core(err)) => {
                eprintln!(
                    "point {} = {value} aborted: {err}",
                    config.sweep.token()
                );
                rows.push(PointRow::diagnostic(config.sweep.token(), value, config.seed));
            }
            Err(err) => return Err(err),
        }
    }
    Ok(MseReport {
        rows,
        config_hash: fnv1a(config.emit().as_bytes()),
        seed: config.seed,
        wall_time: start.elapsed(),
    })
}
