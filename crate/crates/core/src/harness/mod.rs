//! Experiment harness: scenario config, pull tests, pressure sweeps,
//! calibration against the measured dataset, the detection demo and report
//! output.

pub mod calibrate;
pub mod config;
pub mod detection;
pub mod interlock;
pub mod nelder_mead;
pub mod pull;
pub mod report;
pub mod scenario;
pub mod sweep;

pub use config::Config;
pub use pull::{pull_trace, summarize, BlockState, ForceTrace, PullSample, TraceSummary};
pub use scenario::{run_pull_test, run_table, table_case, CaseRun};
