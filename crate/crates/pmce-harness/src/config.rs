//! Experiment configuration: plain-text `key = value` files, validation, and
//! canonical emission.
//!
//! The file format is UTF-8 text, one `key = value` pair per line; `#` starts
//! a comment (whole-line or trailing) and blank lines are ignored. Keys mirror
//! the fields of [`ExperimentConfig`] one-to-one. Parsing is strict: unknown
//! or duplicated keys are errors that name the offending keys, and
//! [`ExperimentConfig::validate`] rejects every out-of-range field with a
//! specific message. [`ExperimentConfig::emit`] writes the canonical form;
//! `parse(emit(config)) == config` holds exactly because floats are printed
//! with Rust's shortest round-trip formatting.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use pmce_core::channel::SystemParams;

use crate::{HarnessError, Result};

/// Axis swept by a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Quantizer bit budget B (values must be integers in 1..=31).
    Bits,
    /// Delay estimation-error variance σ², given in dB relative to the
    /// zero-bit quantizer variance τ_max²/12.
    Sigma2,
    /// Downlink SNR in dB; the noise variance is N0 = 10^(−SNR/10) for a
    /// unit-power transmit signal.
    Snr,
}

impl SweepAxis {
    /// Token used in configuration files and in the CSV `sweep_axis` column.
    pub fn token(self) -> &'static str {
        match self {
            SweepAxis::Bits => "bits",
            SweepAxis::Sigma2 => "sigma2",
            SweepAxis::Snr => "snr",
        }
    }

    /// Parse a configuration token.
    pub fn from_token(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(SweepAxis::Bits),
            "sigma2" => Ok(SweepAxis::Sigma2),
            "snr" => Ok(SweepAxis::Snr),
            other => Err(HarnessError::Config(format!(
                "unknown sweep axis `{other}` (expected bits, sigma2, or snr)"
            ))),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Where per-trial delay estimates come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DelaySource {
    /// True delays plus Gaussian errors of the configured variance σ².
    Synthetic,
    /// Frequency-domain ESPRIT on the uplink snapshot (optionally noisy, see
    /// `uplink_snr_db`).
    Esprit,
}

impl DelaySource {
    /// Token used in configuration files.
    pub fn token(self) -> &'static str {
        match self {
            DelaySource::Synthetic => "synthetic",
            DelaySource::Esprit => "esprit",
        }
    }

    /// Parse a configuration token.
    pub fn from_token(s: &str) -> Result<Self> {
        match s {
            "synthetic" => Ok(DelaySource::Synthetic),
            "esprit" => Ok(DelaySource::Esprit),
            other => Err(HarnessError::Config(format!(
                "unknown delay source `{other}` (expected synthetic or esprit)"
            ))),
        }
    }
}

impl fmt::Display for DelaySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Which estimators a run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Estimators {
    /// Parametric least squares on the fed-forward quantized delays.
    pub ls_parametric: bool,
    /// Genie-aided linear MMSE using the true delays and covariance.
    pub mmse_genie: bool,
}

impl Estimators {
    /// Both estimators enabled (the default).
    pub fn both() -> Self {
        Estimators {
            ls_parametric: true,
            mmse_genie: true,
        }
    }

    /// Only the LS pipeline.
    pub fn ls_only() -> Self {
        Estimators {
            ls_parametric: true,
            mmse_genie: false,
        }
    }

    /// Configuration token: comma-separated subset of
    /// `ls_parametric,mmse_genie`.
    pub fn token(self) -> String {
        let mut parts = Vec::new();
        if self.ls_parametric {
            parts.push("ls_parametric");
        }
        if self.mmse_genie {
            parts.push("mmse_genie");
        }
        parts.join(",")
    }

    /// Parse a comma-separated estimator list.
    pub fn from_token(s: &str) -> Result<Self> {
        let mut est = Estimators {
            ls_parametric: false,
            mmse_genie: false,
        };
        for part in s.split(',') {
            match part.trim() {
                "ls_parametric" => est.ls_parametric = true,
                "mmse_genie" => est.mmse_genie = true,
                "" => {}
                other => {
                    return Err(HarnessError::Config(format!(
                        "unknown estimator `{other}` (expected ls_parametric or mmse_genie)"
                    )))
                }
            }
        }
        if !est.ls_parametric && !est.mmse_genie {
            return Err(HarnessError::Config(
                "at least one estimator must be enabled".into(),
            ));
        }
        Ok(est)
    }
}

/// Full description of one simulation experiment.
///
/// The base operating point is (`snr_db`, `bits`, `sigma2_db`); a sweep
/// replaces the field selected by `sweep` with each entry of `values` in turn
/// while the other two stay at their base values.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Number of OFDM subcarriers K.
    pub k: usize,
    /// Subcarrier spacing Δf in Hz.
    pub delta_f: f64,
    /// Number of BS antennas M.
    pub m: usize,
    /// Number of eigenbeams D.
    pub d: usize,
    /// Number of multipath components L.
    pub l: usize,
    /// Maximum path delay τ_max in seconds.
    pub tau_max: f64,
    /// Base downlink SNR in dB (N0 = 10^(−SNR/10)).
    pub snr_db: f64,
    /// Base quantizer bit budget B.
    pub bits: u32,
    /// Base delay-error variance in dB relative to τ_max²/12; absent means
    /// error-free synthetic estimates (σ² = 0).
    pub sigma2_db: Option<f64>,
    /// Swept axis.
    pub sweep: SweepAxis,
    /// Sweep values (may be empty, producing an empty report).
    pub values: Vec<f64>,
    /// Number of multipath profiles per point.
    pub n_profiles: usize,
    /// Number of channel/noise realizations per profile.
    pub n_realizations: usize,
    /// Per-trial delay estimate source.
    pub delay_source: DelaySource,
    /// Estimators to evaluate.
    pub estimators: Estimators,
    /// Master seed; together with the config it fully determines the output.
    pub seed: u64,
    /// Delay-merge threshold scale η (threshold T/(η·K)).
    pub eta: f64,
    /// Minimum pairwise delay gap for generated profiles; absent selects the
    /// default T/(2K).
    pub min_gap: Option<f64>,
    /// Condition-number cap on the LS Gram (1/K)X̂ᴴX̂.
    pub condition_cap: f64,
    /// Uplink SNR in dB for the ESPRIT source; absent means a noiseless
    /// uplink snapshot.
    pub uplink_snr_db: Option<f64>,
    /// Exponential power-decay constant of generated profiles, in seconds.
    pub decay: f64,
    /// Rays per path in generated profiles.
    pub n_subpaths: usize,
    /// Redraw budget for profile generation under the gap constraint.
    pub max_redraws: usize,
}

impl Default for ExperimentConfig {
    /// Reference configuration: K = 256, Δf = 15 kHz, M = 64, D = L = 6,
    /// τ_max = 5 μs, SNR = 10 dB, B = 10, a bits sweep over 2..=12 (even),
    /// 20 profiles × 500 realizations.
    fn default() -> Self {
        ExperimentConfig {
            k: 256,
            delta_f: 15_000.0,
            m: 64,
            d: 6,
            l: 6,
            tau_max: 5e-6,
            snr_db: 10.0,
            bits: 10,
            sigma2_db: None,
            sweep: SweepAxis::Bits,
            values: vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0],
            n_profiles: 20,
            n_realizations: 500,
            delay_source: DelaySource::Synthetic,
            estimators: Estimators::both(),
            seed: 1,
            eta: 1.0,
            min_gap: None,
            condition_cap: 1e6,
            uplink_snr_db: None,
            decay: 1e-6,
            n_subpaths: 20,
            max_redraws: 1000,
        }
    }
}

impl ExperimentConfig {
    /// Base system parameters (noise variance from `snr_db`).
    pub fn params(&self) -> Result<SystemParams<f64>> {
        SystemParams::new(
            self.k,
            self.delta_f,
            self.m,
            self.d,
            self.l,
            snr_db_to_n0(self.snr_db),
            self.tau_max,
        )
        .map_err(HarnessError::from)
    }

    /// Base absolute delay-error variance σ² in s².
    pub fn sigma2_abs(&self) -> f64 {
        self.sigma2_db
            .map(|db| sigma2_db_to_abs(db, self.tau_max))
            .unwrap_or(0.0)
    }

    /// Parse a configuration from text.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut seen = BTreeSet::new();
        let mut unknown = Vec::new();
        let mut duplicate = Vec::new();

        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(HarnessError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    line_no + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                duplicate.push(key.to_string());
                continue;
            }
            if !cfg.apply(key, value)? {
                unknown.push(key.to_string());
            }
        }

        if !unknown.is_empty() {
            return Err(HarnessError::Config(format!(
                "unknown configuration keys: {}",
                unknown.join(", ")
            )));
        }
        if !duplicate.is_empty() {
            return Err(HarnessError::Config(format!(
                "duplicated configuration keys: {}",
                duplicate.join(", ")
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load and parse a configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Apply one `key = value` pair; returns false for unknown keys.
    fn apply(&mut self, key: &str, value: &str) -> Result<bool> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| {
                HarnessError::Config(format!("key `{key}`: cannot parse `{value}`"))
            })
        }
        match key {
            "k" => self.k = num(key, value)?,
            "delta_f" => self.delta_f = num(key, value)?,
            "m" => self.m = num(key, value)?,
            "d" => self.d = num(key, value)?,
            "l" => self.l = num(key, value)?,
            "tau_max" => self.tau_max = num(key, value)?,
            "snr_db" => self.snr_db = num(key, value)?,
            "bits" => self.bits = num(key, value)?,
            "sigma2_db" => self.sigma2_db = Some(num(key, value)?),
            "sweep" => self.sweep = SweepAxis::from_token(value)?,
            "values" => {
                let mut vals = Vec::new();
                for part in value.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    vals.push(num::<f64>(key, part)?);
                }
                self.values = vals;
            }
            "n_profiles" => self.n_profiles = num(key, value)?,
            "n_realizations" => self.n_realizations = num(key, value)?,
            "delay_source" => self.delay_source = DelaySource::from_token(value)?,
            "estimators" => self.estimators = Estimators::from_token(value)?,
            "seed" => self.seed = num(key, value)?,
            "eta" => self.eta = num(key, value)?,
            "min_gap" => self.min_gap = Some(num(key, value)?),
            "condition_cap" => self.condition_cap = num(key, value)?,
            "uplink_snr_db" => self.uplink_snr_db = Some(num(key, value)?),
            "decay" => self.decay = num(key, value)?,
            "n_subpaths" => self.n_subpaths = num(key, value)?,
            "max_redraws" => self.max_redraws = num(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Full validation; every failure names the offending field.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if self.bits == 0 || self.bits > 31 {
            return Err(HarnessError::Config(format!(
                "bits must lie in 1..=31, got {}",
                self.bits
            )));
        }
        if self.n_profiles == 0 {
            return Err(HarnessError::Config("n_profiles must be ≥ 1".into()));
        }
        if self.n_realizations == 0 {
            return Err(HarnessError::Config("n_realizations must be ≥ 1".into()));
        }
        if !(self.eta > 0.0) {
            return Err(HarnessError::Config(format!(
                "eta must be positive, got {}",
                self.eta
            )));
        }
        if !(self.condition_cap >= 1.0) {
            return Err(HarnessError::Config(format!(
                "condition_cap must be ≥ 1, got {}",
                self.condition_cap
            )));
        }
        if let Some(g) = self.min_gap {
            if !(g >= 0.0) || !g.is_finite() {
                return Err(HarnessError::Config(format!(
                    "min_gap must be a finite nonnegative delay, got {g}"
                )));
            }
        }
        if !(self.decay > 0.0) {
            return Err(HarnessError::Config(format!(
                "decay must be positive, got {}",
                self.decay
            )));
        }
        if self.n_subpaths == 0 {
            return Err(HarnessError::Config("n_subpaths must be ≥ 1".into()));
        }
        if self.max_redraws == 0 {
            return Err(HarnessError::Config("max_redraws must be ≥ 1".into()));
        }
        for &v in &self.values {
            if !v.is_finite() {
                return Err(HarnessError::Config(format!(
                    "sweep values must be finite, got {v}"
                )));
            }
            if self.sweep == SweepAxis::Bits {
                let b = v.round();
                if (v - b).abs() > 0.0 || !(1.0..=31.0).contains(&b) {
                    return Err(HarnessError::Config(format!(
                        "bits sweep values must be integers in 1..=31, got {v}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical text form; `parse(emit()) == self`.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("k", self.k.to_string());
        push("delta_f", self.delta_f.to_string());
        push("m", self.m.to_string());
        push("d", self.d.to_string());
        push("l", self.l.to_string());
        push("tau_max", self.tau_max.to_string());
        push("snr_db", self.snr_db.to_string());
        push("bits", self.bits.to_string());
        if let Some(db) = self.sigma2_db {
            push("sigma2_db", db.to_string());
        }
        push("sweep", self.sweep.token().to_string());
        push(
            "values",
            self.values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        push("n_profiles", self.n_profiles.to_string());
        push("n_realizations", self.n_realizations.to_string());
        push("delay_source", self.delay_source.token().to_string());
        push("estimators", self.estimators.token());
        push("seed", self.seed.to_string());
        push("eta", self.eta.to_string());
        if let Some(g) = self.min_gap {
            push("min_gap", g.to_string());
        }
        push("condition_cap", self.condition_cap.to_string());
        if let Some(snr) = self.uplink_snr_db {
            push("uplink_snr_db", snr.to_string());
        }
        push("decay", self.decay.to_string());
        push("n_subpaths", self.n_subpaths.to_string());
        push("max_redraws", self.max_redraws.to_string());
        out
    }
}

/// Noise variance for a unit-power signal: N0 = 10^(−SNR_dB/10).
pub fn snr_db_to_n0(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

/// Absolute delay-error variance from its dB value, normalized to the
/// zero-bit quantizer variance: σ² = (τ_max²/12)·10^(dB/10).
pub fn sigma2_db_to_abs(db: f64, tau_max: f64) -> f64 {
    tau_max * tau_max / 12.0 * 10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_emit() {
        let cfg = ExperimentConfig::default();
        let parsed = ExperimentConfig::parse(&cfg.emit()).expect("canonical form parses");
        assert_eq!(parsed, cfg, "emit/parse round trip must be the identity");
    }

    #[test]
    fn optional_fields_round_trip() {
        let cfg = ExperimentConfig {
            sigma2_db: Some(-40.0),
            min_gap: Some(3.9e-7),
            uplink_snr_db: Some(30.0),
            values: vec![-30.0, -40.0, -50.0],
            sweep: SweepAxis::Sigma2,
            ..ExperimentConfig::default()
        };
        let parsed = ExperimentConfig::parse(&cfg.emit()).expect("canonical form parses");
        assert_eq!(parsed, cfg, "optional fields must survive the round trip");
    }

    #[test]
    fn unknown_key_is_named() {
        let err = ExperimentConfig::parse("k = 64\nwavelength = 3\n").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("wavelength"),
            "error must name the unknown key, got: {msg}"
        );
    }

    #[test]
    fn duplicate_key_is_named() {
        let err = ExperimentConfig::parse("seed = 1\nseed = 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("duplicated") && msg.contains("seed"),
            "error must name the duplicated key, got: {msg}"
        );
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let cfg = ExperimentConfig::parse(
            "# leading comment\n\nseed = 7   # trailing comment\n   \nbits = 12\n",
        )
        .expect("commented file parses");
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.bits, 12);
    }

    #[test]
    fn fractional_bits_sweep_values_are_rejected() {
        let err = ExperimentConfig::parse("sweep = bits\nvalues = 3.5,4\n").unwrap_err();
        assert!(
            err.to_string().contains("integers"),
            "fractional bits values must be rejected"
        );
    }

    #[test]
    fn snr_and_sigma2_conversions() {
        assert!((snr_db_to_n0(10.0) - 0.1).abs() < 1e-15);
        assert!((snr_db_to_n0(0.0) - 1.0).abs() < 1e-15);
        let s = sigma2_db_to_abs(-40.0, 5e-6);
        let expect = 5e-6f64 * 5e-6 / 12.0 * 1e-4;
        assert!(
            (s - expect).abs() < 1e-12 * expect,
            "σ² dB conversion is relative to τ_max²/12"
        );
    }

    #[test]
    fn invalid_fields_are_rejected_with_names() {
        for (text, needle) in [
            ("bits = 0", "bits"),
            ("eta = 0", "eta"),
            ("condition_cap = 0.5", "condition_cap"),
            ("decay = 0", "decay"),
            ("n_profiles = 0", "n_profiles"),
            ("n_realizations = 0", "n_realizations"),
            ("n_subpaths = 0", "n_subpaths"),
            ("max_redraws = 0", "max_redraws"),
        ] {
            let err = ExperimentConfig::parse(text).unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "`{text}` must fail naming `{needle}`, got: {err}"
            );
        }
    }

    #[test]
    fn estimator_lists_parse() {
        assert_eq!(
            Estimators::from_token("ls_parametric").unwrap(),
            Estimators::ls_only()
        );
        assert_eq!(
            Estimators::from_token("ls_parametric,mmse_genie").unwrap(),
            Estimators::both()
        );
        assert!(Estimators::from_token("kalman").is_err());
        assert!(Estimators::from_token("").is_err(), "empty list is invalid");
    }
}
