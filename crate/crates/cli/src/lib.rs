//! Library half of the `inbits` command-line tool.
//!
//! The binary in `main.rs` is a thin shell around [`run_command`], which
//! parses an argument vector, executes it, and returns the exit code plus
//! the exact bytes destined for stdout and stderr. Keeping the whole CLI
//! behind a function makes end-to-end tests ordinary Rust tests: build an
//! argument vector, call [`run_command`], inspect the structured
//! [`Report`](report::Report) or the rendered text.
//!
//! Modules:
//! - [`report`]: structured command output and its text / JSON / CSV
//!   renderings.
//! - [`scenario`]: the JSON input formats (scenario files and standalone
//!   study designs) and their conversion into library types.
//! - [`commands`]: argument definitions and the command implementations.

pub mod commands;
pub mod report;
pub mod scenario;

pub use commands::{run_command, CommandOutput};
pub use report::{OutputFormat, Report, Row, Section, Unit};
pub use scenario::{
    parse_scenario, parse_study_design, NamedLedger, NamedStudy, Scenario, ScenarioTask,
    SCHEMA_VERSION,
};
