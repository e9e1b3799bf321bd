//! Configured experiments: parameter sweeps over the entanglement schemes,
//! with CSV or JSON reports.

pub mod config;
pub mod report;
pub mod runner;
pub mod schemes;

pub use config::{parse_config, ExperimentConfig, ReportFormat, Scenario, SweepParameter};
pub use report::{render, render_csv, render_json, resolve_output_path, write_report, CSV_HEADER, OUTPUT_DIR_ENV};
pub use runner::{run, run_point, run_single, ExperimentReport, PointResult, Provenance, TIMESTAMP_ENV};
pub use schemes::{InputSqueezing, INPUT_RELATIVE_PHASE};
