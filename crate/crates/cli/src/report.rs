//! Suite report structure and emission (pretty JSON or a flat CSV row).
//!
//! Reports are deterministic for a fixed suite spec apart from the timing
//! fields (`runtime_ms`, `mean_trial_ms`), which callers comparing runs
//! should ignore.

use bilinext_core::descriptor::PDescriptor;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1.0.0";

/// One violated invariant, with enough context to replay the instance.
#[derive(Debug, Serialize)]
pub struct FailureEntry {
    /// Zero-based trial index within the suite run.
    pub trial: u64,
    /// Derived per-trial seed (mix of the suite seed and the trial index);
    /// feeding it to `compute --seed` replays the trial's optimizer runs.
    pub seed: u64,
    /// Name of the violated invariant (a tolerance key, or "execution" when
    /// the trial errored instead of completing).
    pub invariant: String,
    /// Measured gap, when the trial completed far enough to produce one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
    /// Human-readable context (error messages, offending values).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Instance descriptor in the JSON schema accepted by `compute`.
    pub instance: serde_json::Value,
}

/// Outcome of a full suite run.
#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: &'static str,
    pub suite_id: String,
    pub seed: u64,
    pub trials: u64,
    pub trials_run: u64,
    /// Upper bound used for generated dimensions.
    pub dims: usize,
    pub p_values: Vec<PDescriptor>,
    /// Effective tolerances after `--tol` overrides, keyed by invariant.
    pub tolerances: BTreeMap<String, f64>,
    pub pass: bool,
    /// Largest measured gap across all trials (also over passing ones).
    pub worst_gap: f64,
    pub failures: Vec<FailureEntry>,
    /// Suite-specific summary values (e.g. the counterexample's norms).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    /// Wall-clock duration; excluded from determinism comparisons.
    pub runtime_ms: u128,
    /// Mean per-trial duration; excluded from determinism comparisons.
    pub mean_trial_ms: f64,
}

impl SuiteReport {
    /// Flat row for batch tabulation:
    /// `suite,<id>,<seed>,<trials_run>,<pass>,<worst_gap>,<failure_count>`.
    pub fn csv_row(&self) -> String {
        format!(
            "suite,{},{},{},{},{:e},{}",
            self.suite_id,
            self.seed,
            self.trials_run,
            self.pass,
            self.worst_gap,
            self.failures.len()
        )
    }
}

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut body = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    body.push('\n');
    body
}

/// Writes `body` to `out` when given, to stdout otherwise.
pub fn emit(body: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, body),
        None => {
            print!("{body}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}

fn write_file(path: &PathBuf, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::io(path, e))
}
