//! The acceptance gate: ten executable criteria covering the full pipeline.
//!
//! Every criterion is a pure function returning a [`CriterionOutcome`] with a
//! one-line verdict; the `verify` CLI subcommand and the `acceptance`
//! integration test target both call these functions, so the gate is the same
//! everywhere. All seeds, configurations, and tolerances are pinned here —
//! the criteria are deterministic and their pass/fail status is reproducible
//! bit-for-bit.

use std::time::Instant;

use pmce_core::amp_est::{build_design_matrix, effective_covariance};
use pmce_core::analysis::{noise_floor, quant_error_variance, TheoryInputs};
use pmce_core::channel::{
    make_profile_with, realize, spatial_covariance, MultipathProfile, SystemParams,
};
use pmce_core::delay_est::{esprit, freq_covariance, measure_sigma2, quantize};
use pmce_core::linalg::hermitian_eigen_desc;
use pmce_core::precoding::{eigenbeams, training};
use rand::Rng;
use rayon::ThreadPoolBuilder;

use crate::config::{DelaySource, Estimators, ExperimentConfig, SweepAxis};
use crate::streams::{derive_rng, profile_rng, trial_rng, TAG_MEASURE};
use crate::sweep::{run_point, run_sweep};

/// Master seed of the acceptance gate.
pub const ACCEPTANCE_SEED: u64 = 1009;

/// Verdict of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    /// Short identifier (`C1`..`C10`).
    pub id: &'static str,
    /// One-line description of what was checked.
    pub title: &'static str,
    /// Whether the criterion held.
    pub passed: bool,
    /// Measured numbers behind the verdict.
    pub detail: String,
}

impl CriterionOutcome {
    fn new(id: &'static str, title: &'static str, passed: bool, detail: String) -> Self {
        CriterionOutcome {
            id,
            title,
            passed,
            detail,
        }
    }

    /// The one-line pass/fail report.
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {} — {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail
        )
    }
}

/// Scaled system for the Monte-Carlo-heavy criteria: K = 64, M = 32,
/// D = L = 4, SNR = 10 dB, B = 14, error-free synthetic delays, profiles
/// drawn with minimum gap T/K (resolvable paths without spurious merges).
fn scaled_config() -> ExperimentConfig {
    let t = 1.0 / 15_000.0;
    ExperimentConfig {
        k: 64,
        delta_f: 15_000.0,
        m: 32,
        d: 4,
        l: 4,
        tau_max: 5e-6,
        snr_db: 10.0,
        bits: 14,
        sigma2_db: None,
        sweep: SweepAxis::Bits,
        values: vec![],
        n_profiles: 20,
        n_realizations: 500,
        delay_source: DelaySource::Synthetic,
        estimators: Estimators::ls_only(),
        seed: ACCEPTANCE_SEED,
        eta: 1.0,
        min_gap: Some(t / 64.0),
        condition_cap: 1e6,
        uplink_snr_db: None,
        decay: 1e-6,
        n_subpaths: 20,
        max_redraws: 1000,
    }
}

/// Reference system for the capacity criteria: K = 256, M = 64, D = L = 6,
/// SNR = 10 dB, profiles drawn with minimum gap 1.5·T/K so that quantized
/// delays stay clear of the merge threshold.
fn full_config() -> ExperimentConfig {
    let t = 1.0 / 15_000.0;
    ExperimentConfig {
        estimators: Estimators::ls_only(),
        n_profiles: 10,
        n_realizations: 200,
        seed: ACCEPTANCE_SEED,
        min_gap: Some(1.5 * t / 256.0),
        ..ExperimentConfig::default()
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    assert!(!xs.is_empty(), "median needs at least one sample");
    xs.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// C1 — At a high bit budget and no feedback error the LS error reaches the
/// noise floor N0·L·D within 10% (and the check runs in under a minute).
pub fn criterion_1() -> CriterionOutcome {
    let start = Instant::now();
    let config = scaled_config();
    let outcome = run_point(&config, 14.0);
    let elapsed = start.elapsed();
    match outcome {
        Ok(row) => {
            let emp = row.mse_empirical.expect("LS estimator is enabled");
            let params = config.params().expect("config is valid");
            let floor = noise_floor(&params);
            let rel = (emp - floor).abs() / floor;
            let in_time = elapsed.as_secs_f64() < 60.0;
            CriterionOutcome::new(
                "C1",
                "LS error floor at B = 14, σ² = 0",
                rel <= 0.10 && in_time,
                format!(
                    "empirical {emp:.4} vs N0·L·D = {floor:.4}, rel dev {:.2}% (tolerance 10%), {:.1} s",
                    rel * 100.0,
                    elapsed.as_secs_f64()
                ),
            )
        }
        Err(err) => CriterionOutcome::new(
            "C1",
            "LS error floor at B = 14, σ² = 0",
            false,
            format!("aborted: {err}"),
        ),
    }
}

/// C2 — The exact closed form tracks the empirical LS error within 5% at
/// B ∈ {8, 10, 12} with 10⁴ trials per point (under five minutes).
pub fn criterion_2() -> CriterionOutcome {
    let start = Instant::now();
    let mut config = scaled_config();
    config.sweep = SweepAxis::Bits;
    config.values = vec![8.0, 10.0, 12.0];
    let report = match run_sweep(&config) {
        Ok(r) => r,
        Err(err) => {
            return CriterionOutcome::new(
                "C2",
                "exact closed form vs Monte Carlo over B",
                false,
                format!("aborted: {err}"),
            )
        }
    };
    let elapsed = start.elapsed();
    let mut passed = elapsed.as_secs_f64() < 300.0;
    let mut parts = Vec::new();
    for row in &report.rows {
        let emp = row.mse_empirical.expect("LS estimator is enabled");
        let exact = row.mse_exact.expect("LS estimator is enabled");
        let rel = (emp - exact).abs() / exact;
        passed &= rel <= 0.05;
        parts.push(format!("B={}: {:.2}%", row.sweep_value, rel * 100.0));
    }
    CriterionOutcome::new(
        "C2",
        "exact closed form vs Monte Carlo over B",
        passed,
        format!(
            "rel gaps [{}] (tolerance 5%), {:.1} s",
            parts.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

/// C3 — The quantizer error variance matches Δ²/12 within 2% over 10⁶
/// uniform draws at B ∈ {2, 4, 8}.
pub fn criterion_3() -> CriterionOutcome {
    let tau_max = 5e-6f64;
    let n = 1_000_000usize;
    let mut passed = true;
    let mut parts = Vec::new();
    for (i, bits) in [2u32, 4, 8].into_iter().enumerate() {
        let mut rng = derive_rng(ACCEPTANCE_SEED, TAG_MEASURE, 300 + i as u64, 0);
        let mut acc = 0.0f64;
        for _ in 0..n {
            let tau = rng.random::<f64>() * tau_max;
            let (_, tau_hat) = quantize(tau, bits, tau_max);
            let e = tau_hat - tau;
            acc += e * e;
        }
        let emp = acc / n as f64;
        let theory = quant_error_variance(tau_max, bits);
        let rel = (emp - theory).abs() / theory;
        passed &= rel <= 0.02;
        parts.push(format!("B={bits}: {:.2}%", rel * 100.0));
    }
    CriterionOutcome::new(
        "C3",
        "mid-rise quantizer variance Δ²/12",
        passed,
        format!("rel devs [{}] (tolerance 2%)", parts.join(", ")),
    )
}

/// C4 — Saturation: at σ² = −40 dB the error changes by < 10% from B = 9 to
/// B = 12, and at B = 3 by < 10% from σ² = −30 dB to −50 dB.
pub fn criterion_4() -> CriterionOutcome {
    let mut cfg_bits = scaled_config();
    cfg_bits.sigma2_db = Some(-40.0);
    cfg_bits.sweep = SweepAxis::Bits;
    cfg_bits.values = vec![9.0, 12.0];

    let mut cfg_sigma = scaled_config();
    cfg_sigma.bits = 3;
    cfg_sigma.sweep = SweepAxis::Sigma2;
    cfg_sigma.values = vec![-30.0, -50.0];

    let (bits_report, sigma_report) = match (run_sweep(&cfg_bits), run_sweep(&cfg_sigma)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            let err = a.err().or(b.err()).expect("at least one arm failed");
            return CriterionOutcome::new(
                "C4",
                "error saturation against the dominant impairment",
                false,
                format!("aborted: {err}"),
            );
        }
    };
    let change = |rows: &[crate::report::PointRow]| -> f64 {
        let a = rows[0].mse_empirical.expect("LS estimator is enabled");
        let b = rows[1].mse_empirical.expect("LS estimator is enabled");
        (b - a).abs() / a
    };
    let bits_change = change(&bits_report.rows);
    let sigma_change = change(&sigma_report.rows);
    CriterionOutcome::new(
        "C4",
        "error saturation against the dominant impairment",
        bits_change <= 0.10 && sigma_change <= 0.10,
        format!(
            "B 9→12 at σ²=−40 dB: {:.2}%; σ² −30→−50 dB at B=3: {:.2}% (tolerance 10%)",
            bits_change * 100.0,
            sigma_change * 100.0
        ),
    )
}

/// C5 — The genie MMSE Monte Carlo matches the closed-form bound within 5%
/// at SNR ∈ {0, 10, 20} dB and never loses to LS (up to Monte-Carlo error).
pub fn criterion_5() -> CriterionOutcome {
    let mut config = scaled_config();
    config.estimators = Estimators::both();
    config.sweep = SweepAxis::Snr;
    config.values = vec![0.0, 10.0, 20.0];
    let report = match run_sweep(&config) {
        Ok(r) => r,
        Err(err) => {
            return CriterionOutcome::new(
                "C5",
                "genie MMSE vs closed-form bound over SNR",
                false,
                format!("aborted: {err}"),
            )
        }
    };
    let mut passed = true;
    let mut parts = Vec::new();
    for row in &report.rows {
        let mmse = row.mmse_empirical.expect("MMSE estimator is enabled");
        let theory = row.mmse_theory.expect("always computed");
        let ls = row.mse_empirical.expect("LS estimator is enabled");
        let ls_se = row.mse_se.expect("LS estimator is enabled");
        let rel = (mmse - theory).abs() / theory;
        let ordered = mmse <= ls + 3.0 * ls_se;
        passed &= rel <= 0.05 && ordered;
        parts.push(format!(
            "SNR={}: dev {:.2}%{}",
            row.sweep_value,
            rel * 100.0,
            if ordered { "" } else { ", MMSE > LS" }
        ));
    }
    CriterionOutcome::new(
        "C5",
        "genie MMSE vs closed-form bound over SNR",
        passed,
        format!("[{}] (tolerance 5%)", parts.join("; ")),
    )
}

/// C6 — At SNR = 30 dB, B = 14, σ² = 0 the LS/MMSE error ratio lies in
/// [1.0, 1.15]: with all impairments removed LS approaches the bound.
pub fn criterion_6() -> CriterionOutcome {
    let mut config = scaled_config();
    config.estimators = Estimators::both();
    config.sweep = SweepAxis::Snr;
    let row = match run_point(&config, 30.0) {
        Ok(r) => r,
        Err(err) => {
            return CriterionOutcome::new(
                "C6",
                "LS approaches the MMSE bound at high SNR",
                false,
                format!("aborted: {err}"),
            )
        }
    };
    let ls = row.mse_empirical.expect("LS estimator is enabled");
    let mmse = row.mmse_empirical.expect("MMSE estimator is enabled");
    let ratio = ls / mmse;
    CriterionOutcome::new(
        "C6",
        "LS approaches the MMSE bound at high SNR",
        (1.0..=1.15).contains(&ratio),
        format!("LS/MMSE = {ratio:.4} (required [1.00, 1.15])"),
    )
}

/// C7 — Delay estimation: (a) noiseless ESPRIT recovers all delays to 1 ns
/// accuracy (max error < 10⁻⁹ s) on 100 seeded profiles with gaps ≥ T/K;
/// (b) the measured error variance does not grow when the antenna count
/// doubles 16 → 32 → 64.
pub fn criterion_7() -> CriterionOutcome {
    let t = 1.0 / 15_000.0;
    let params: SystemParams<f64> = SystemParams::new(256, 15_000.0, 64, 6, 6, 0.1, 5e-6).expect("valid");
    let mut max_err = 0.0f64;
    for p_idx in 0..100 {
        let mut rng = profile_rng(ACCEPTANCE_SEED, 700 + p_idx);
        let profile = match make_profile_with(&params, 1e-6, 20, Some(t / 256.0), 1000, &mut rng) {
            Ok(p) => p,
            Err(err) => {
                return CriterionOutcome::new(
                    "C7",
                    "ESPRIT exactness and error-variance scaling",
                    false,
                    format!("profile generation failed: {err}"),
                )
            }
        };
        let mut trial = trial_rng(ACCEPTANCE_SEED, 700 + p_idx, 0);
        let real = realize(&profile, &params, &mut trial);
        let r_f = freq_covariance(&real.cfr_ul);
        let (mut est, unreliable) = match esprit(&r_f, params.l, params.t()) {
            Ok(r) => r,
            Err(err) => {
                return CriterionOutcome::new(
                    "C7",
                    "ESPRIT exactness and error-variance scaling",
                    false,
                    format!("ESPRIT failed: {err}"),
                )
            }
        };
        if unreliable {
            return CriterionOutcome::new(
                "C7",
                "ESPRIT exactness and error-variance scaling",
                false,
                "noiseless snapshot flagged unreliable".into(),
            );
        }
        est.sort_by(|a, b| a.partial_cmp(b).expect("delays are finite"));
        for (e, tr) in est.iter().zip(&profile.delays) {
            max_err = max_err.max((e - tr).abs());
        }
    }

    // (b) σ² medians across the antenna counts, five repetitions each with a
    // shared profile per repetition (K = 128 uplink, 30 dB SNR).
    let mut medians = Vec::new();
    for m in [16usize, 32, 64] {
        let params_m: SystemParams<f64> = SystemParams::new(128, 15_000.0, m, 6, 6, 0.1, 5e-6).expect("valid");
        let mut samples = Vec::new();
        for rep in 0..5u64 {
            let mut prof_rng = derive_rng(ACCEPTANCE_SEED, TAG_MEASURE, 710, rep);
            let profile = make_profile_with(
                &params_m,
                1e-6,
                20,
                Some(t / 128.0),
                1000,
                &mut prof_rng,
            )
            .expect("gap T/K is feasible at K = 128");
            let mut rng = derive_rng(ACCEPTANCE_SEED, TAG_MEASURE, 720 + m as u64, rep);
            match measure_sigma2(&params_m, &profile, 100, Some(30.0), &mut rng) {
                Ok((s2, _)) => samples.push(s2),
                Err(err) => {
                    return CriterionOutcome::new(
                        "C7",
                        "ESPRIT exactness and error-variance scaling",
                        false,
                        format!("σ² measurement failed: {err}"),
                    )
                }
            }
        }
        medians.push(median(samples));
    }
    let monotone = medians[0] >= medians[1] && medians[1] >= medians[2];
    CriterionOutcome::new(
        "C7",
        "ESPRIT exactness and error-variance scaling",
        max_err < 1e-9 && monotone,
        format!(
            "noiseless max |τ̂−τ| = {max_err:.3e} (required < 1e-9); σ² medians M=16/32/64: \
             {:.3e}/{:.3e}/{:.3e} (must not increase)",
            medians[0], medians[1], medians[2]
        ),
    )
}

/// C8 — Structure: (a) the quantized-design Gram off-diagonal median scales
/// like 1/K between K = 256 and K = 4096 (ratio in [1/8, 1/2]); (b) R_β has
/// numeric rank D·L on 50 random profiles; (c) captured energy never exceeds
/// M and reaches it (within 1%) for a rank-D equal-power profile.
pub fn criterion_8() -> CriterionOutcome {
    let t = 1.0 / 15_000.0;

    // (a) Gram off-diagonal scaling.
    let mut medians = Vec::new();
    for (ki, k) in [256usize, 4096].into_iter().enumerate() {
        let params_k: SystemParams<f64> = SystemParams::new(k, 15_000.0, 64, 6, 6, 0.1, 5e-6).expect("valid");
        let mut offs = Vec::new();
        for draw in 0..50u64 {
            let mut rng = derive_rng(ACCEPTANCE_SEED, TAG_MEASURE, 800 + ki as u64, draw);
            let profile =
                make_profile_with(&params_k, 1e-6, 20, Some(t / 256.0), 1000, &mut rng)
                    .expect("gap T/256 is feasible");
            let quant: Vec<f64> = profile
                .delays
                .iter()
                .map(|&tau| quantize(tau, 10, params_k.tau_max).1)
                .collect();
            let train = training(params_k.d, k, &mut rng);
            let design =
                build_design_matrix(&train, &quant, &params_k).expect("distinct delays");
            let gram = (design.x.adjoint() * &design.x).unscale(k as f64);
            let dl = gram.nrows();
            for i in 0..dl {
                for j in 0..dl {
                    if i != j {
                        offs.push(gram[(i, j)].norm());
                    }
                }
            }
        }
        medians.push(median(offs));
    }
    let ratio = medians[1] / medians[0];
    let a_ok = (0.125..=0.5).contains(&ratio);

    // (b) Numeric rank of R_β on random profiles.
    let params: SystemParams<f64> = SystemParams::new(256, 15_000.0, 64, 6, 6, 0.1, 5e-6).expect("valid");
    let mut n_full_rank = 0usize;
    for p in 0..50u64 {
        let mut rng = derive_rng(ACCEPTANCE_SEED, TAG_MEASURE, 900, p);
        let profile = make_profile_with(&params, 1e-6, 20, None, 1000, &mut rng)
            .expect("default gap is feasible");
        let spatial = spatial_covariance(&profile, params.m);
        let u_s = eigenbeams(&spatial, params.d).expect("covariance is PSD");
        let cov = effective_covariance(&u_s, &spatial, &profile.delays, &params)
            .expect("dimensions agree");
        let (vals, _) = hermitian_eigen_desc(&cov.r_beta).expect("R_β is Hermitian");
        let rank = vals.iter().filter(|&&v| v > 1e-10 * vals[0]).count();
        if rank == params.d * params.l {
            n_full_rank += 1;
        }
    }
    let b_ok = n_full_rank == 50;

    // (c) Captured energy: bounded by M everywhere, equal to M for a
    // rank-D equal-power profile.
    let mut c_ok = true;
    let mut max_trace: f64 = 0.0;
    for p in 0..1000u64 {
        let mut rng = derive_rng(ACCEPTANCE_SEED, TAG_MEASURE, 950, p);
        let profile = make_profile_with(&params, 1e-6, 20, None, 1000, &mut rng)
            .expect("default gap is feasible");
        let spatial = spatial_covariance(&profile, params.m);
        let u_s = eigenbeams(&spatial, params.d).expect("covariance is PSD");
        let theory = TheoryInputs::from_beams(&u_s, &spatial, &params, 10, 0.0);
        max_trace = max_trace.max(theory.trace_total);
        c_ok &= theory.trace_total <= params.m as f64 * (1.0 + 1e-9);
    }
    let equal_power = MultipathProfile {
        delays: vec![0.5e-6, 1.25e-6, 2.0e-6, 2.75e-6, 3.5e-6, 4.25e-6],
        powers: vec![1.0 / 6.0; 6],
        powers_ul: vec![1.0 / 6.0; 6],
        subpath_angles: (0..6)
            .map(|l| vec![(-75.0 + 30.0 * l as f64).to_radians()])
            .collect(),
    };
    let spatial = spatial_covariance(&equal_power, params.m);
    let u_s = eigenbeams(&spatial, params.d).expect("covariance is PSD");
    let theory = TheoryInputs::from_beams(&u_s, &spatial, &params, 10, 0.0);
    let m = params.m as f64;
    let equality_dev = (theory.trace_total - m).abs() / m;
    c_ok &= equality_dev <= 0.01;

    CriterionOutcome::new(
        "C8",
        "Gram scaling, R_β rank, and captured energy",
        a_ok && b_ok && c_ok,
        format!(
            "(a) off-diag median ratio {ratio:.3} (required [0.125, 0.5]); \
             (b) full-rank profiles {n_full_rank}/50 (required 50); \
             (c) max trace {max_trace:.2} ≤ M = {m:.0}, equal-power dev {:.3}%",
            equality_dev * 100.0
        ),
    )
}

/// C9 — Capacity: (a) five feedback bits reach the error-free-CSI capacity
/// within 2% at SNR = 10 dB, σ² = −40 dB; (b) at B = 10 the capacity moves
/// by < 1% per decade of σ² below −25 dB.
pub fn criterion_9() -> CriterionOutcome {
    let mut quantized = full_config();
    quantized.sigma2_db = Some(-40.0);
    quantized.sweep = SweepAxis::Bits;

    let mut ideal = full_config();
    ideal.sigma2_db = None;
    ideal.sweep = SweepAxis::Bits;

    let (row_q, row_i) = match (run_point(&quantized, 5.0), run_point(&ideal, 30.0)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            let err = a.err().or(b.err()).expect("at least one arm failed");
            return CriterionOutcome::new(
                "C9",
                "capacity robustness to coarse feedback",
                false,
                format!("aborted: {err}"),
            );
        }
    };
    let cap_q = row_q.capacity.expect("LS estimator is enabled");
    let cap_i = row_i.capacity.expect("LS estimator is enabled");
    let a_dev = (cap_q - cap_i).abs() / cap_i;
    let a_ok = a_dev <= 0.02;

    let mut sweep_cfg = full_config();
    sweep_cfg.bits = 10;
    sweep_cfg.sweep = SweepAxis::Sigma2;
    sweep_cfg.values = vec![-30.0, -40.0, -50.0];
    let report = match run_sweep(&sweep_cfg) {
        Ok(r) => r,
        Err(err) => {
            return CriterionOutcome::new(
                "C9",
                "capacity robustness to coarse feedback",
                false,
                format!("aborted: {err}"),
            )
        }
    };
    let caps: Vec<f64> = report
        .rows
        .iter()
        .map(|r| r.capacity.expect("LS estimator is enabled"))
        .collect();
    let mut b_ok = true;
    let mut b_devs = Vec::new();
    for w in caps.windows(2) {
        let dev = (w[1] - w[0]).abs() / w[0];
        b_ok &= dev <= 0.01;
        b_devs.push(format!("{:.3}%", dev * 100.0));
    }
    CriterionOutcome::new(
        "C9",
        "capacity robustness to coarse feedback",
        a_ok && b_ok,
        format!(
            "(a) B=5 vs ideal CSI: {cap_q:.4} vs {cap_i:.4} bits/s/Hz, dev {:.3}% (tolerance 2%); \
             (b) σ² −30→−40→−50 dB changes [{}] (tolerance 1%)",
            a_dev * 100.0,
            b_devs.join(", ")
        ),
    )
}

/// C10 — Determinism: the same sweep on one and on four worker threads emits
/// byte-identical CSV.
pub fn criterion_10() -> CriterionOutcome {
    let mut config = scaled_config();
    config.estimators = Estimators::both();
    config.sweep = SweepAxis::Bits;
    config.values = vec![8.0, 10.0];
    config.n_profiles = 3;
    config.n_realizations = 50;

    let run_with = |threads: usize| -> crate::Result<String> {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool builds");
        pool.install(|| run_sweep(&config)).map(|r| r.to_csv())
    };
    match (run_with(1), run_with(4)) {
        (Ok(csv1), Ok(csv4)) => {
            let identical = csv1 == csv4;
            CriterionOutcome::new(
                "C10",
                "byte-identical CSV across thread counts",
                identical,
                if identical {
                    format!("{} bytes identical on 1 and 4 threads", csv1.len())
                } else {
                    "outputs differ between 1 and 4 threads".to_string()
                },
            )
        }
        (a, b) => CriterionOutcome::new(
            "C10",
            "byte-identical CSV across thread counts",
            false,
            format!("aborted: {}", a.err().or(b.err()).expect("one arm failed")),
        ),
    }
}

/// Run all ten criteria in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ]
}
