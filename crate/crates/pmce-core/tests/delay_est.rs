//! Validation of the uplink delay-subspace estimator and the feedback
//! quantizer: exact noiseless recovery across random geometries, quantizer
//! error statistics, and behavior of the measured error variance.

use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use pmce_core::channel::{make_profile, realize, steering_matrix, SystemParams};
use pmce_core::delay_est::{
    dequantize, esprit, feedforward, freq_covariance, measure_sigma2, quantize, synth_estimate,
    DelayReport,
};
use pmce_core::linalg::hermitian_eigen_desc;

type C64 = Complex<f64>;

#[test]
fn full_uplink_pipeline_recovers_profile_delays() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 8, 4, 3, 0.1, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3001);
    // resolvable spacing: at least T/K between paths
    let gap = params.t() / params.k as f64;
    for _ in 0..10 {
        let profile =
            pmce_core::channel::make_profile_with(&params, 1e-6, 20, Some(gap), 1000, &mut rng)
                .unwrap();
        let real = realize(&profile, &params, &mut rng);
        let r_f = freq_covariance(&real.cfr_ul);
        let (est, unreliable) = esprit(&r_f, params.l, params.t()).unwrap();
        assert!(!unreliable, "noiseless subspace must be reliable");
        for (e, t) in est.iter().zip(&profile.delays) {
            assert!(
                (e - t).abs() < 1e-9,
                "noiseless recovery must be exact: {e:e} vs {t:e}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Noiseless LS-ESPRIT is exact for any path count up to 8 and any
    /// geometry with at least T/K spacing.
    #[test]
    fn esprit_recovery_is_exact_across_geometries(
        l in 1usize..=8,
        seed in 0u64..10_000,
    ) {
        let k = 128usize;
        let t = 1.0 / 15e3;
        let tau_max = 5e-6;
        let gap = t / k as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // place l delays with guaranteed ≥ T/K separation
        let free = tau_max - (l - 1) as f64 * gap;
        let mut fracs: Vec<f64> = (0..l).map(|_| rng.random::<f64>() * 0.999).collect();
        fracs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let delays: Vec<f64> = fracs
            .iter()
            .enumerate()
            .map(|(i, f)| f * free + i as f64 * gap)
            .collect();

        // diagonally dominant gains keep the snapshot matrix full rank
        let s = steering_matrix(&delays, k, t).unwrap();
        let mut a = DMatrix::<C64>::identity(l, l);
        for p in 0..l {
            for q in 0..l {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                a[(p, q)] += C64::new(0.2 * re, 0.2 * im);
            }
        }
        let h = a * s.transpose();
        let r_f = freq_covariance(&h);
        let (est, unreliable) = esprit(&r_f, l, t).unwrap();
        prop_assert!(!unreliable);
        for (e, want) in est.iter().zip(&delays) {
            prop_assert!((e - want).abs() < 1e-11, "{e:e} vs {want:e}");
        }
    }

    /// Mid-rise reconstruction levels invert to an in-range delay and the
    /// error never exceeds half a step.
    #[test]
    fn quantizer_error_never_exceeds_half_step(
        frac in 0.0..1.0f64,
        bits in 1u32..=16,
    ) {
        let tau_max = 5e-6;
        let tau = frac * tau_max;
        let (index, tau_hat) = quantize(tau, bits, tau_max);
        let delta = tau_max / (1u64 << bits) as f64;
        prop_assert!(index < (1u32 << bits));
        prop_assert!((dequantize(index, bits, tau_max) - tau_hat).abs() < 1e-21);
        prop_assert!((tau - tau_hat).abs() <= 0.5 * delta + 1e-21);
        prop_assert!((0.0..=tau_max).contains(&tau_hat));
    }
}

#[test]
fn mc_quantizer_error_variance_is_delta_sq_over_12() {
    let tau_max = 5e-6f64;
    let n = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(3002);
    for bits in [2u32, 4, 8] {
        let delta = tau_max / (1u64 << bits) as f64;
        let want = delta * delta / 12.0;
        let mut acc = 0.0;
        for _ in 0..n {
            let tau = rng.random::<f64>() * tau_max;
            let (_, tau_hat) = quantize(tau, bits, tau_max);
            acc += (tau - tau_hat) * (tau - tau_hat);
        }
        let got = acc / n as f64;
        assert!(
            (got - want).abs() / want < 0.02,
            "B = {bits}: error variance {got:e} vs Δ²/12 = {want:e}"
        );
    }
}

#[test]
fn mc_synthetic_estimate_variance_matches_sigma2() {
    let sigma2 = 2.5e-15f64; // σ = 50 ns, far from the clamp boundaries
    let tau_max = 5e-6;
    let truth = [2.5e-6];
    let n = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let mut acc = 0.0;
    let mut mean = 0.0;
    for _ in 0..n {
        let est = synth_estimate(&truth, sigma2, tau_max, &mut rng);
        let e = est[0] - truth[0];
        mean += e;
        acc += e * e;
    }
    let got = acc / n as f64;
    assert!(
        (got - sigma2).abs() / sigma2 < 0.01,
        "sample error variance {got:e} vs σ² = {sigma2:e}"
    );
    assert!(
        (mean / n as f64).abs() < 3.0 * (sigma2 / n as f64).sqrt(),
        "synthetic errors must be unbiased"
    );
}

#[test]
fn frequency_covariance_rank_equals_path_count() {
    let params: SystemParams<f64> = SystemParams::new(256, 15e3, 64, 6, 6, 0.1, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3004);
    let profile = make_profile(&params, 1e-6, 20, &mut rng).unwrap();
    let real = realize(&profile, &params, &mut rng);
    let r_f = freq_covariance(&real.cfr_ul);
    let (vals, _) = hermitian_eigen_desc(&r_f).unwrap();

    let lead = vals[0];
    assert!(
        vals[params.l - 1] > 1e-6 * lead,
        "signal eigenvalue λ_{} = {:e} collapsed below the rank threshold",
        params.l - 1,
        vals[params.l - 1]
    );
    for (i, &v) in vals.iter().enumerate().skip(params.l) {
        assert!(
            v.abs() < 1e-6 * lead,
            "noise eigenvalue λ_{i} = {v:e} is not negligible"
        );
    }
}

#[test]
fn frequency_covariance_is_hermitian_psd() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 8, 4, 3, 0.1, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3005);
    let profile = make_profile(&params, 1e-6, 20, &mut rng).unwrap();
    let real = realize(&profile, &params, &mut rng);
    let r_f = freq_covariance(&real.cfr_ul);

    for p in 0..params.k {
        for q in 0..params.k {
            let diff = (r_f[(p, q)] - r_f[(q, p)].conj()).norm();
            assert!(diff < 1e-14, "Hermitian symmetry broken at ({p},{q})");
        }
    }
    let (vals, _) = hermitian_eigen_desc(&r_f).unwrap();
    assert!(vals.iter().all(|&v| v >= -1e-10 * vals[0].max(1.0)));
}

#[test]
fn measured_sigma2_vanishes_without_uplink_noise() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 16, 4, 3, 0.0, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3006);
    let gap = params.t() / params.k as f64;
    let profile =
        pmce_core::channel::make_profile_with(&params, 1e-6, 20, Some(gap), 1000, &mut rng)
            .unwrap();
    let (sigma2, n_unreliable) = measure_sigma2(&params, &profile, 100, None, &mut rng).unwrap();
    assert!(
        sigma2 < 1e-18,
        "noiseless delay estimation must be numerically exact, got σ² = {sigma2:e}"
    );
    assert_eq!(n_unreliable, 0);
}

#[test]
fn measured_sigma2_improves_with_uplink_snr() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 16, 4, 3, 0.0, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3007);
    let gap = 1.5 * params.t() / params.k as f64;
    let profile =
        pmce_core::channel::make_profile_with(&params, 1e-6, 20, Some(gap), 1000, &mut rng)
            .unwrap();

    let mut rng_lo = ChaCha8Rng::seed_from_u64(3008);
    let (lo, _) = measure_sigma2(&params, &profile, 100, Some(0.0), &mut rng_lo).unwrap();
    let mut rng_hi = ChaCha8Rng::seed_from_u64(3008);
    let (hi, _) = measure_sigma2(&params, &profile, 100, Some(30.0), &mut rng_hi).unwrap();
    assert!(
        hi < lo,
        "σ² must improve with uplink SNR: 30 dB → {hi:e}, 0 dB → {lo:e}"
    );
}

#[test]
fn measure_sigma2_enforces_minimum_trials() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 16, 4, 3, 0.0, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3009);
    let profile = make_profile(&params, 1e-6, 20, &mut rng).unwrap();
    assert!(measure_sigma2(&params, &profile, 99, None, &mut rng).is_err());
}

#[test]
fn delay_report_sorts_and_round_trips() {
    let truth: Vec<f64> = vec![1.0e-6, 2.0e-6, 3.0e-6];
    let est = vec![2.05e-6, 0.95e-6, 3.10e-6]; // unsorted on purpose
    let report = DelayReport::build(&truth, est, 10, 5e-6, 1e-16, false);

    assert!(report.est_delays.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(report.bits, 10);
    assert_eq!(report.quant_indices.len(), 3);
    for (i, (&idx, &q)) in report
        .quant_indices
        .iter()
        .zip(&report.quant_delays)
        .enumerate()
    {
        assert!((dequantize(idx, 10, 5e-6) - q).abs() < 1e-21, "path {i}");
        // quantized value must sit within half a step of the sorted estimate
        let delta = 5e-6 / 1024.0;
        assert!((q - report.est_delays[i]).abs() <= 0.5 * delta + 1e-21);
    }

    let est_errors = report.est_errors();
    let quant_errors = report.quant_errors();
    assert_eq!(est_errors.len(), 3);
    assert_eq!(quant_errors.len(), 3);
    assert!((est_errors[0] - (-0.05e-6)).abs() < 1e-12);

    // the feedback link is error-free: indices pass through unchanged
    let fed = feedforward(&report.quant_indices);
    assert_eq!(fed, report.quant_indices);
    assert_eq!(feedforward(&[]), Vec::<u32>::new());
}
