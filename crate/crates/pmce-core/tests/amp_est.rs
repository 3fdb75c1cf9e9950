//! Validation of the downlink amplitude estimators: conditioning of the
//! training design, the LS noise gain and bias, the cascaded attenuation
//! structure under quantized delays, and agreement of the structured MMSE
//! solver with a dense oracle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use pmce_core::amp_est::{
    build_design_matrix, effective_covariance, ls_amplitudes, merge_delays, mmse_estimate,
    regenerate_cfr,
};
use pmce_core::analysis::{mmse_theoretical, mse_empirical, noise_floor, rb_eigenvalues};
use pmce_core::channel::{
    dirichlet, make_profile, make_profile_with, realize, spatial_covariance, steering_matrix,
    SystemParams,
};
use pmce_core::delay_est::quantize;
use pmce_core::error::Error;
use pmce_core::precoding::{effective_channel, eigenbeams, training, transmit};

type C64 = Complex<f64>;

fn draw_noise(k: usize, n0: f64, rng: &mut ChaCha8Rng) -> DVector<C64> {
    let sd = (n0 / 2.0).sqrt();
    DVector::from_fn(k, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(sd * re, sd * im)
    })
}

#[test]
fn gram_off_diagonals_stay_small_for_random_training() {
    let k = 256usize;
    let params: SystemParams<f64> = SystemParams::new(k, 15e3, 8, 3, 2, 0.1, 5e-6).unwrap();
    let t = params.t();
    // grid-aligned spacing keeps same-beam steering columns orthogonal
    let delays = [1.0e-6, 1.0e-6 + 2.0 * t / k as f64];
    let bound = 5.0 / (k as f64).sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(4001);
    for _ in 0..50 {
        let block = training(params.d, k, &mut rng);
        let design = build_design_matrix(&block, &delays, &params).unwrap();
        let gram = design.x.adjoint() * &design.x;
        let dl = gram.nrows();
        for i in 0..dl {
            assert!((gram[(i, i)].re - k as f64).abs() < 1e-9 * k as f64);
            for j in 0..dl {
                if i != j {
                    let normalized = gram[(i, j)].norm() / k as f64;
                    assert!(
                        normalized < bound,
                        "G[{i},{j}]/K = {normalized:.4} above 5/√K = {bound:.4}"
                    );
                }
            }
        }
    }
}

#[test]
fn mc_ls_noise_gain_matches_trace_formula() {
    // pure-noise observations: E‖β̂‖² = N0·Tr{(XᴴX)⁻¹} and the regenerated
    // CFR error approaches the N0·L·D floor for long training
    let params: SystemParams<f64> = SystemParams::new(1024, 15e3, 4, 2, 2, 0.1, 5e-6).unwrap();
    let n0 = params.n0;
    let t = params.t();
    let delays = [1.0e-6, 1.0e-6 + 4.0 * t / 1024.0];
    let mut rng = ChaCha8Rng::seed_from_u64(4002);
    let block = training(params.d, params.k, &mut rng);
    let design = build_design_matrix(&block, &delays, &params).unwrap();

    let gram = design.x.adjoint() * &design.x;
    let gram_inv = gram.clone().try_inverse().expect("Gram must invert");
    let want_beta = n0 * gram_inv.trace().re;
    // the training design is near-orthogonal: Tr{(XᴴX)⁻¹} ≈ DL/K
    let dl = (params.d * params.l) as f64;
    assert!((gram_inv.trace().re - dl / 1024.0).abs() / (dl / 1024.0) < 0.05);

    let n = 10_000usize;
    let zero = DMatrix::<C64>::zeros(params.d, params.k);
    let mut acc_beta = 0.0;
    let mut acc_mse = 0.0;
    for _ in 0..n {
        let y = draw_noise(params.k, n0, &mut rng);
        let beta_hat = ls_amplitudes(&design, &y, 1e6).unwrap();
        acc_beta += beta_hat.iter().map(|z| z.norm_sqr()).sum::<f64>();
        let b_hat = regenerate_cfr(&beta_hat, &delays, &params).unwrap();
        acc_mse += mse_empirical(&b_hat, &zero).unwrap();
    }
    let got_beta = acc_beta / n as f64;
    assert!(
        (got_beta - want_beta).abs() / want_beta < 0.03,
        "E‖β̂‖² = {got_beta:e} vs N0·Tr{{(XᴴX)⁻¹}} = {want_beta:e}"
    );

    let got_mse = acc_mse / n as f64;
    let floor = noise_floor(&params);
    assert!(
        (got_mse - floor).abs() / floor < 0.05,
        "noise-only CFR error {got_mse:.4} vs N0·L·D = {floor:.4}"
    );
}

#[test]
fn mc_ls_estimates_are_unbiased() {
    let params: SystemParams<f64> = SystemParams::new(256, 15e3, 4, 2, 2, 0.1, 5e-6).unwrap();
    let n0 = 0.5;
    let t = params.t();
    let delays = [0.8e-6, 2.9e-6];
    let mut rng = ChaCha8Rng::seed_from_u64(4003);
    let block = training(params.d, params.k, &mut rng);
    let design = build_design_matrix(&block, &delays, &params).unwrap();
    let _ = t;

    let beta0 = DVector::from_iterator(
        4,
        [
            C64::new(1.0, 0.5),
            C64::new(-0.3, 0.8),
            C64::new(0.2, -1.1),
            C64::new(-0.7, -0.4),
        ],
    );
    let clean = &design.x * &beta0;

    let n = 2000usize;
    let mut mean = DVector::<C64>::zeros(4);
    for _ in 0..n {
        let y = &clean + draw_noise(params.k, n0, &mut rng);
        mean += ls_amplitudes(&design, &y, 1e6).unwrap();
    }
    mean /= C64::new(n as f64, 0.0);

    let gram_inv = (design.x.adjoint() * &design.x).try_inverse().unwrap();
    let var_budget = n0 * gram_inv.trace().re / n as f64;
    let dev: f64 = (&mean - &beta0).iter().map(|z| z.norm_sqr()).sum();
    assert!(
        dev < 25.0 * var_budget,
        "‖mean(β̂) − β₀‖² = {dev:e} vs 25·N0·Tr{{(XᴴX)⁻¹}}/N = {:e}",
        25.0 * var_budget
    );
}

#[test]
fn quantized_delay_mismatch_attenuates_by_dirichlet_kernel() {
    // engineered grid: τ_max = T/8 and B = 5 make the reconstruction step
    // exactly T/K, so the quantized steering columns are orthogonal and the
    // LS response separates into a per-path Dirichlet attenuation plus
    // bounded cross-path leakage
    let t = 1.0 / 15e3;
    let k = 256usize;
    let tau_max = t / 8.0;
    let bits = 5u32;
    let params: SystemParams<f64> = SystemParams::new(k, 15e3, 4, 1, 3, 0.0, tau_max).unwrap();

    let truth = [0.7e-6, 2.3e-6, 5.1e-6];
    let quantized: Vec<f64> = truth.iter().map(|&tau| quantize(tau, bits, tau_max).1).collect();
    let step = tau_max / 32.0;
    assert!((step - t / k as f64).abs() < 1e-21, "grid engineering broken");

    let s_true = steering_matrix(&truth, k, t).unwrap();
    let s_hat = steering_matrix(&quantized, k, t).unwrap();
    // quantized columns are exactly T/K-spaced, hence orthogonal
    let gram_hat = s_hat.adjoint() * &s_hat;
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { k as f64 } else { 0.0 };
            assert!((gram_hat[(i, j)] - C64::new(want, 0.0)).norm() < 1e-9);
        }
    }

    let beta = DVector::from_iterator(
        3,
        [C64::new(0.9, -0.2), C64::new(-0.4, 0.6), C64::new(0.3, 0.3)],
    );
    let y = &s_true * &beta;

    let block = pmce_core::precoding::TrainingBlock {
        phases: DMatrix::<f64>::zeros(1, k),
    };
    let design = build_design_matrix(&block, &quantized, &params).unwrap();
    let beta_hat = ls_amplitudes(&design, &y, 1e12).unwrap();

    for l in 0..3 {
        // diagonal response: the path survives attenuated by the kernel
        let c_ll = s_hat.column(l).dotc(&s_true.column(l)) / C64::new(k as f64, 0.0);
        let kernel = dirichlet(quantized[l] - truth[l], k, t);
        assert!((c_ll - kernel).norm() < 1e-12, "kernel identity broken");

        let mut leakage = 0.0;
        for lp in 0..3 {
            if lp != l {
                let c = s_hat.column(l).dotc(&s_true.column(lp)) / C64::new(k as f64, 0.0);
                leakage += c.norm() * beta[lp].norm();
            }
        }
        let dev = (beta_hat[l] - kernel * beta[l]).norm();
        assert!(
            dev <= leakage + 1e-9,
            "path {l}: response {dev:e} outside kernel + leakage budget {leakage:e}"
        );
        assert!(kernel.norm() < 1.0, "mismatched kernel must attenuate");
        assert!(kernel.norm() > 0.5, "half-step error keeps most of the path");
    }
}

#[test]
fn near_duplicate_delays_are_refused_by_the_condition_cap() {
    let params: SystemParams<f64> = SystemParams::new(128, 15e3, 4, 2, 2, 0.1, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let block = training(params.d, params.k, &mut rng);
    let delays = [2.5e-6, 2.5e-6 + 1e-12];
    let design = build_design_matrix(&block, &delays, &params).unwrap();
    let y = draw_noise(params.k, 1.0, &mut rng);

    match ls_amplitudes(&design, &y, 1e6) {
        Err(Error::IllConditioned { cond, cap }) => {
            assert!(cond > cap, "reported condition {cond:e} must exceed cap {cap:e}");
            assert!((cap - 1e6).abs() < 1.0);
        }
        other => panic!("expected an ill-conditioning refusal, got {other:?}"),
    }

    // merging first removes the degeneracy
    let (merged, map) = merge_delays(&delays, params.k, params.t(), 1.0);
    assert_eq!(merged.len(), 1);
    assert_eq!(map, vec![0, 0]);
    let design2 = build_design_matrix(&block, &merged, &params).unwrap();
    assert!(ls_amplitudes(&design2, &y, 1e6).is_ok());
}

#[test]
fn mc_effective_covariance_matches_sample_statistics() {
    let params: SystemParams<f64> = SystemParams::new(4, 15e3, 4, 2, 2, 0.1, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4005);
    let profile = make_profile_with(&params, 1e-6, 4, Some(0.5e-6), 1000, &mut rng).unwrap();
    let spatial = spatial_covariance(&profile, params.m);
    let u_s = eigenbeams(&spatial, params.d).unwrap();
    let cov = effective_covariance(&u_s, &spatial, &profile.delays, &params).unwrap();

    let dl = params.d * params.l;
    let n = 100_000usize;
    let mut acc = DMatrix::<C64>::zeros(dl, dl);
    for _ in 0..n {
        let real = realize(&profile, &params, &mut rng);
        let eff = effective_channel(&u_s, &real, &profile, &params);
        let mut stacked = DVector::<C64>::zeros(dl);
        for d in 0..params.d {
            for l in 0..params.l {
                stacked[d * params.l + l] = eff.beta[(d, l)];
            }
        }
        acc += &stacked * stacked.adjoint();
    }
    let sample = acc / C64::new(n as f64, 0.0);
    let num: f64 = (&sample - &cov.r_beta).iter().map(|z| z.norm_sqr()).sum();
    let den: f64 = cov.r_beta.iter().map(|z| z.norm_sqr()).sum();
    let rel = (num / den).sqrt();
    assert!(
        rel < 0.03,
        "sample R_β deviates by {:.2}% in Frobenius norm",
        100.0 * rel
    );
}

#[test]
fn structured_mmse_matches_dense_oracle() {
    let params: SystemParams<f64> = SystemParams::new(16, 15e3, 4, 2, 2, 0.05, 5e-6).unwrap();
    let n0 = params.n0;
    let mut rng = ChaCha8Rng::seed_from_u64(4006);
    let profile = make_profile(&params, 1e-6, 8, &mut rng).unwrap();
    let spatial = spatial_covariance(&profile, params.m);
    let u_s = eigenbeams(&spatial, params.d).unwrap();
    let cov = effective_covariance(&u_s, &spatial, &profile.delays, &params).unwrap();

    let real = realize(&profile, &params, &mut rng);
    let eff = effective_channel(&u_s, &real, &profile, &params);
    let block = training(params.d, params.k, &mut rng);
    let y = transmit(&block, &eff, n0, &mut rng);

    let b_hat = mmse_estimate(&y, &block, &cov, n0).unwrap();

    // dense oracle on the stacked effective CFR: R_b = (I⊗S)R_β(I⊗Sᴴ),
    // observation y = A·b with A[k, d·K+k] = e^{jφ_d[k]}
    let (d, k, l) = (params.d, params.k, params.l);
    let mut r_b = DMatrix::<C64>::zeros(d * k, d * k);
    for d1 in 0..d {
        for d2 in 0..d {
            let c_block = cov.r_beta.view((d1 * l, d2 * l), (l, l));
            let dense = &cov.s * c_block * cov.s.adjoint();
            r_b.view_mut((d1 * k, d2 * k), (k, k)).copy_from(&dense);
        }
    }
    let mut a = DMatrix::<C64>::zeros(k, d * k);
    for di in 0..d {
        for ki in 0..k {
            a[(ki, di * k + ki)] = block.phasor(di, ki);
        }
    }
    let ar = &a * &r_b;
    let mut g = &ar * a.adjoint();
    for i in 0..k {
        g[(i, i)] += C64::new(n0, 0.0);
    }
    let sol = g.lu().solve(&y).expect("dense MMSE system must solve");
    let b_stack = r_b * a.adjoint() * sol;

    let mut worst = 0.0f64;
    for di in 0..d {
        for ki in 0..k {
            let dev = (b_hat[(di, ki)] - b_stack[di * k + ki]).norm();
            worst = worst.max(dev);
        }
    }
    assert!(
        worst < 1e-8,
        "structured and dense MMSE estimates disagree by {worst:e}"
    );
}

#[test]
fn mc_mmse_achieves_theoretical_error_and_beats_ls() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 16, 2, 2, 0.1, 5e-6).unwrap();
    let n0 = params.n0;
    let mut rng = ChaCha8Rng::seed_from_u64(4007);
    let gap = 1.5 * params.t() / params.k as f64;
    let profile = make_profile_with(&params, 1e-6, 20, Some(gap), 1000, &mut rng).unwrap();
    let spatial = spatial_covariance(&profile, params.m);
    let u_s = eigenbeams(&spatial, params.d).unwrap();
    let cov = effective_covariance(&u_s, &spatial, &profile.delays, &params).unwrap();
    let lambda = rb_eigenvalues(&cov).unwrap();
    let want = mmse_theoretical(&lambda, n0);

    let n = 4000usize;
    let mut acc_mmse = 0.0;
    let mut acc_ls = 0.0;
    for _ in 0..n {
        let real = realize(&profile, &params, &mut rng);
        let eff = effective_channel(&u_s, &real, &profile, &params);
        let block = training(params.d, params.k, &mut rng);
        let y = transmit(&block, &eff, n0, &mut rng);

        let b_mmse = mmse_estimate(&y, &block, &cov, n0).unwrap();
        acc_mmse += mse_empirical(&b_mmse, &eff.b).unwrap();

        let design = build_design_matrix(&block, &profile.delays, &params).unwrap();
        let beta_hat = ls_amplitudes(&design, &y, 1e6).unwrap();
        let b_ls = regenerate_cfr(&beta_hat, &profile.delays, &params).unwrap();
        acc_ls += mse_empirical(&b_ls, &eff.b).unwrap();
    }
    let got = acc_mmse / n as f64;
    assert!(
        (got - want).abs() / want < 0.05,
        "empirical MMSE {got:.4} vs theoretical {want:.4}"
    );
    let ls_mean = acc_ls / n as f64;
    assert!(
        got < ls_mean,
        "MMSE ({got:.4}) must not lose to LS ({ls_mean:.4})"
    );
}

#[test]
fn ls_chain_is_exact_without_noise_or_mismatch() {
    let params: SystemParams<f64> = SystemParams::new(64, 15e3, 8, 3, 4, 0.0, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4008);
    let profile = make_profile(&params, 1e-6, 20, &mut rng).unwrap();
    let spatial = spatial_covariance(&profile, params.m);
    let u_s = eigenbeams(&spatial, params.d).unwrap();
    let real = realize(&profile, &params, &mut rng);
    let eff = effective_channel(&u_s, &real, &profile, &params);
    let block = training(params.d, params.k, &mut rng);
    let y = transmit(&block, &eff, 0.0, &mut rng);

    let design = build_design_matrix(&block, &profile.delays, &params).unwrap();
    let beta_hat = ls_amplitudes(&design, &y, 1e6).unwrap();
    let b_hat = regenerate_cfr(&beta_hat, &profile.delays, &params).unwrap();
    let err = mse_empirical(&b_hat, &eff.b).unwrap();
    assert!(
        err < 1e-18,
        "noiseless LS with exact delays must be exact, residual {err:e}"
    );
}

#[test]
fn merged_design_keeps_the_original_path_mapping() {
    let params: SystemParams<f64> = SystemParams::new(256, 15e3, 4, 2, 3, 0.1, 5e-6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4009);
    let block = training(params.d, params.k, &mut rng);

    let delays = [1.00e-6, 1.02e-6, 3.00e-6];
    let (merged, map) = merge_delays(&delays, params.k, params.t(), 1.0);
    assert_eq!(merged.len(), 2);
    assert_eq!(map, vec![0, 0, 1]);

    let mut design = build_design_matrix(&block, &merged, &params).unwrap();
    assert_eq!(design.x.ncols(), params.d * merged.len());
    assert_eq!(design.merged_map, vec![0, 1], "identity before rewiring");
    design.merged_map = map.clone();

    // every original path must land on a valid merged column group
    assert!(design.merged_map.iter().all(|&c| c < merged.len()));
    // and the regenerated CFR has full beam dimension regardless of merging
    let beta_hat = DVector::from_element(params.d * merged.len(), C64::new(0.1, 0.0));
    let b_hat = regenerate_cfr(&beta_hat, &merged, &params).unwrap();
    assert_eq!(b_hat.shape(), (params.d, params.k));
}
