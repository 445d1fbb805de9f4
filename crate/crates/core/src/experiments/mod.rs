//! Scenario orchestration: configuration, study runners, the acceptance
//! suite and CSV reports.

pub mod config;
pub mod report;
pub mod scenario;
pub mod verify;

use std::path::{Path, PathBuf};

pub use config::{load_config, parse_config, ConfigError, GermSource, ScenarioConfig, Study};
pub use report::{emit_csv, format_g17, ReportRow, RowStatus};
pub use scenario::run_study;

/// Seed of the random polynomial suites when neither the command line nor
/// the configuration sets one.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },
}

impl ExperimentError {
    pub fn numeric(error: impl std::fmt::Display) -> Self {
        ExperimentError::Numeric(error.to_string())
    }

    /// 2 for configuration and output problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Numeric(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StudyOutput {
    pub raw: Vec<ReportRow>,
    pub fit: Vec<ReportRow>,
}

impl StudyOutput {
    pub fn violations(&self) -> usize {
        self.raw
            .iter()
            .chain(&self.fit)
            .filter(|r| r.status == RowStatus::Violation)
            .count()
    }

    pub fn extend(&mut self, other: StudyOutput) {
        self.raw.extend(other.raw);
        self.fit.extend(other.fit);
    }
}

/// Writes `<name>_raw.csv` and `<name>_fit.csv` into `out_dir`.
pub fn write_outputs(name: &str, output: &StudyOutput, out_dir: &Path) -> Result<(PathBuf, PathBuf), ExperimentError> {
    std::fs::create_dir_all(out_dir).map_err(|e| ExperimentError::Output {
        path: out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    let raw = out_dir.join(format!("{name}_raw.csv"));
    let fit = out_dir.join(format!("{name}_fit.csv"));
    for (path, rows) in [(&raw, &output.raw), (&fit, &output.fit)] {
        emit_csv(rows, path).map_err(|e| ExperimentError::Output {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    Ok((raw, fit))
}
