//! Model files, reports and the `obshap` command line.

pub mod commands;
pub mod document;
pub mod report;

pub use commands::{emit_scenarios, run, run_analyze, run_check, CliError};
pub use document::{parse_document, parse_model, render_model, ModelDocument, ParseError};
pub use report::ReportDocument;
