//! Command-line front end: seeded sweeps, the acceptance gate, and σ²
//! calibration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pmce_core::delay_est::measure_sigma2;
use pmce_harness::acceptance;
use pmce_harness::config::{ExperimentConfig, SweepAxis};
use pmce_harness::report::emit_csv;
use pmce_harness::streams::{derive_rng, profile_rng, TAG_MEASURE};
use pmce_harness::sweep::run_sweep;
use pmce_harness::HarnessError;

#[derive(Parser)]
#[command(
    name = "pmce",
    about = "Parametric downlink channel estimation experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured sweep and write the results as CSV.
    Simulate {
        /// Configuration file (`key = value` lines).
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker thread count (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Override the sweep axis (bits, sigma2, or snr).
        #[arg(long)]
        sweep: Option<String>,
        /// Override the sweep values (comma-separated).
        #[arg(long)]
        values: Option<String>,
    },
    /// Run the acceptance gate and exit nonzero if any criterion fails.
    Verify {
        /// Worker thread count (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Measure the empirical ESPRIT error variance for a configuration.
    MeasureSigma2 {
        /// Configuration file (`key = value` lines).
        #[arg(long)]
        config: PathBuf,
    },
}

fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot build thread pool: {e}")))
}

fn simulate(
    config_path: &PathBuf,
    out: &PathBuf,
    seed: Option<u64>,
    threads: Option<usize>,
    sweep: Option<String>,
    values: Option<String>,
) -> Result<(), HarnessError> {
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(axis) = sweep {
        config.sweep = SweepAxis::from_token(&axis)?;
    }
    if let Some(list) = values {
        let mut vals = Vec::new();
        for part in list.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            vals.push(part.parse::<f64>().map_err(|_| {
                HarnessError::Config(format!("--values: cannot parse `{part}`"))
            })?);
        }
        config.values = vals;
    }
    config.validate()?;

    let pool = build_pool(threads)?;
    let report = pool.install(|| run_sweep(&config))?;
    emit_csv(&report, out)?;
    eprintln!(
        "wrote {} point(s) to {} in {:.1} s (seed {}, config hash {:016x})",
        report.rows.len(),
        out.display(),
        report.wall_time.as_secs_f64(),
        report.seed,
        report.config_hash
    );
    Ok(())
}

fn verify(threads: Option<usize>) -> Result<bool, HarnessError> {
    let pool = build_pool(threads)?;
    let outcomes = pool.install(acceptance::run_all);
    let mut all_passed = true;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        all_passed &= outcome.passed;
    }
    let n_pass = outcomes.iter().filter(|o| o.passed).count();
    println!("{n_pass}/{} criteria passed", outcomes.len());
    Ok(all_passed)
}

fn measure(config_path: &PathBuf) -> Result<(), HarnessError> {
    let config = ExperimentConfig::load(config_path)?;
    let params = config.params()?;
    let mut prof_rng = profile_rng(config.seed, 0);
    let profile = pmce_core::channel::make_profile_with(
        &params,
        config.decay,
        config.n_subpaths,
        config.min_gap,
        config.max_redraws,
        &mut prof_rng,
    )?;
    let n_trials = config.n_realizations.max(100);
    let mut rng = derive_rng(config.seed, TAG_MEASURE, 0, 0);
    let (sigma2, n_unreliable) = measure_sigma2(
        &params,
        &profile,
        n_trials,
        config.uplink_snr_db,
        &mut rng,
    )?;
    println!("sigma2_est = {sigma2:e}");
    println!("n_unreliable = {n_unreliable}");
    println!("trials = {n_trials}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate {
            config,
            out,
            seed,
            threads,
            sweep,
            values,
        } => simulate(&config, &out, seed, threads, sweep, values).map(|()| true),
        Command::Verify { threads } => verify(threads),
        Command::MeasureSigma2 { config } => measure(&config).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
