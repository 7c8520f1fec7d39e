//! Command-line front end: configuration parsing, pipeline dispatch and
//! deterministic JSON reports.

pub mod commands;
pub mod config;
pub mod report;

use mps_core::Error as CoreError;

pub use commands::{run_pipeline, Command, Options};
pub use config::{parse_config, ConfigError, RunConfig};
pub use report::{Check, Report};

/// Input rejected before or during a run (exit code 1).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration at {0}")]
    Config(#[from] ConfigError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

/// Resonances and singular systems are numerical failures; every other
/// library error means the input was unusable.
pub fn is_numerical(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::Resonance { .. } | CoreError::SingularMatrix { .. }
    )
}

pub fn run_command(cmd: Command, cfg: &RunConfig, opts: Options) -> Result<Report, CliError> {
    let mut report = Report::new(cmd.name(), cfg.clone());
    if cmd == Command::ReportAll {
        for p in Command::PIPELINES {
            match run_pipeline(p, cfg, opts) {
                Ok(section) => report.push(section),
                Err(e) if is_numerical(&e) => {
                    report.fail(report::Failure::from_error(p.name(), &e));
                    break;
                }
                Err(e) => report.skipped.push(report::Skipped {
                    command: p.name().into(),
                    reason: e.to_string(),
                }),
            }
        }
        return Ok(report);
    }
    match run_pipeline(cmd, cfg, opts) {
        Ok(section) => report.push(section),
        Err(e) if is_numerical(&e) => report.fail(report::Failure::from_error(cmd.name(), &e)),
        Err(e) => return Err(CliError::Input(e.to_string())),
    }
    Ok(report)
}
