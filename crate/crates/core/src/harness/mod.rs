//! Config-driven verification runs and their reports.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{load_config, CaseSpec, Check, SuiteConfig, SweepParam, SweepSpec};
pub use report::{emit_report, read_report, write_report, Format, Report, Summary};
pub use runner::{certify_suite, run_case, run_suite, RunOptions, DEFAULT_SAMPLES, DEFAULT_SEED};
