//! Sweep results and CSV emission.
//!
//! The CSV layout is a fixed contract: one header line, then one row per
//! sweep point in sweep order. Optional columns (estimator-specific results)
//! are left empty when the corresponding estimator is disabled; a point that
//! aborted due to a propagated numerical error becomes a diagnostic row with
//! every result column empty and `trials = 0`. All numbers are printed with
//! Rust's shortest round-trip formatting, so equal results produce
//! byte-identical files.

use std::path::Path;
use std::time::Duration;

use crate::{HarnessError, Result};

/// The fixed CSV header.
pub const CSV_HEADER: &str = "sweep_axis,sweep_value,mse_empirical,mse_se,mse_exact,mse_approx,\
mse_worst,mmse_theory,mmse_empirical,capacity,capacity_se,trials,seed";

/// Results of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRow {
    /// Swept axis token (`bits`, `sigma2`, or `snr`).
    pub sweep_axis: &'static str,
    /// The swept value at this point.
    pub sweep_value: f64,
    /// Monte-Carlo mean LS estimation error ‖b̂ − b‖².
    pub mse_empirical: Option<f64>,
    /// Standard error of `mse_empirical`.
    pub mse_se: Option<f64>,
    /// Mean of the exact closed form evaluated on the realized delay errors.
    pub mse_exact: Option<f64>,
    /// Small-error (second-order Taylor) closed form, averaged over profiles.
    pub mse_approx: Option<f64>,
    /// Worst-case closed form (captured energy replaced by M).
    pub mse_worst: Option<f64>,
    /// Genie MMSE bound from the effective covariance spectrum, averaged over
    /// profiles.
    pub mmse_theory: Option<f64>,
    /// Monte-Carlo mean error of the genie MMSE estimator.
    pub mmse_empirical: Option<f64>,
    /// Mean beamforming capacity of the LS pipeline, bits/s/Hz.
    pub capacity: Option<f64>,
    /// Standard error of `capacity`.
    pub capacity_se: Option<f64>,
    /// Number of Monte-Carlo trials behind the row (0 for a diagnostic row).
    pub trials: usize,
    /// Master seed of the run.
    pub seed: u64,
}

impl PointRow {
    /// Diagnostic row for a point aborted by a numerical error.
    pub fn diagnostic(axis: &'static str, value: f64, seed: u64) -> Self {
        PointRow {
            sweep_axis: axis,
            sweep_value: value,
            mse_empirical: None,
            mse_se: None,
            mse_exact: None,
            mse_approx: None,
            mse_worst: None,
            mmse_theory: None,
            mmse_empirical: None,
            capacity: None,
            capacity_se: None,
            trials: 0,
            seed,
        }
    }

    /// Render the row as one CSV line (no trailing newline).
    pub fn to_csv_line(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| x.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.sweep_axis,
            self.sweep_value,
            opt(self.mse_empirical),
            opt(self.mse_se),
            opt(self.mse_exact),
            opt(self.mse_approx),
            opt(self.mse_worst),
            opt(self.mmse_theory),
            opt(self.mmse_empirical),
            opt(self.capacity),
            opt(self.capacity_se),
            self.trials,
            self.seed,
        )
    }
}

/// A complete sweep report.
#[derive(Debug, Clone)]
pub struct MseReport {
    /// One row per sweep value, in sweep order.
    pub rows: Vec<PointRow>,
    /// FNV-1a hash of the canonical configuration text.
    pub config_hash: u64,
    /// Master seed of the run.
    pub seed: u64,
    /// Wall-clock duration of the sweep (metadata only; never emitted).
    pub wall_time: Duration,
}

impl MseReport {
    /// Render the full CSV document (header + rows, `\n` line endings).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(128 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv_line());
            out.push('\n');
        }
        out
    }
}

/// Write a report to `path` as CSV.
pub fn emit_csv(report: &MseReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv()).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// FNV-1a hash of a byte string (used to fingerprint configurations).
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_the_contract() {
        assert_eq!(
            CSV_HEADER,
            "sweep_axis,sweep_value,mse_empirical,mse_se,mse_exact,mse_approx,mse_worst,\
             mmse_theory,mmse_empirical,capacity,capacity_se,trials,seed"
                .replace(" ", ""),
            "the CSV header is a fixed external contract"
        );
        assert_eq!(
            CSV_HEADER.split(',').count(),
            13,
            "header must have 13 columns"
        );
    }

    #[test]
    fn row_formatting_is_positional() {
        let mut row = PointRow::diagnostic("bits", 8.0, 42);
        row.mse_empirical = Some(1.5);
        row.trials = 10;
        let line = row.to_csv_line();
        assert_eq!(
            line.split(',').count(),
            13,
            "every row must have 13 fields even when empty"
        );
        assert!(line.starts_with("bits,8,1.5,,"), "got: {line}");
        assert!(line.ends_with(",10,42"), "got: {line}");
    }

    #[test]
    fn diagnostic_rows_have_zero_trials_and_empty_results() {
        let row = PointRow::diagnostic("snr", -5.0, 7);
        assert_eq!(row.to_csv_line(), "snr,-5,,,,,,,,,,0,7");
    }

    #[test]
    fn fnv1a_matches_reference_vectors() {
        assert_eq!(fnv1a(b""), 0xCBF2_9CE4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xAF63_DC4C_8601_EC8C);
        assert_eq!(fnv1a(b"foobar"), 0x85944171F73967E8);
    }

    #[test]
    fn csv_document_shape() {
        let report = MseReport {
            rows: vec![
                PointRow::diagnostic("bits", 4.0, 1),
                PointRow::diagnostic("bits", 8.0, 1),
            ],
            config_hash: 0,
            seed: 1,
            wall_time: Duration::ZERO,
        };
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3, "header plus one line per row");
        assert_eq!(lines[0], CSV_HEADER);
        assert!(csv.ends_with('\n'), "document ends with a newline");
    }
}
