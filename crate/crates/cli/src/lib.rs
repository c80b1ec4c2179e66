//! Experiment driver: configuration, runners, acceptance bands and report
//! serialization behind the `pk` binary.

pub mod config;
pub mod experiments;
pub mod report;
pub mod thresholds;

pub use config::{ExperimentConfig, ExperimentKind};
pub use experiments::{run_experiment, run_protein_experiment, run_vrw_experiment, run_whitworth};
pub use report::{emit_report, ExperimentReport, ReportFormat, RunMode};
