//! Verification suites, their configuration and the report format.
//!
//! A run executes the selected suites, each a list of named checks. Every
//! check carries an anchor naming the identity it exercises, a status, the
//! number of cases it evaluated and, on failure, a witness input.
//!
//! Gating checks decide the exit status. Non-gating checks are conditional
//! or informational: they are reported but never fail a run.

mod config;
mod report;
mod runner;
pub(crate) mod suites;
pub mod demo;
pub mod text;

pub use config::{Suite, SuiteConfig};
pub use report::{CheckRecord, Report, Status, Summary, SCHEMA};
pub use runner::run_suite;
pub(crate) use runner::{Outcome, Recorder};
pub use demo::{demo, DemoOutput, Topic};
