//! Command-line studies on top of `fracheat-core`: TOML run configurations,
//! study drivers, and byte-stable reports (delimited tables, two-column plot
//! data, `report.json`).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{parse_config, RunConfig, StudyKind};
pub use error::CliError;
pub use report::{Check, FitSummary, StudyReport, Table, Timings};
pub use run::{execute, prepare_output_dir, run_study, StudyOutput};
