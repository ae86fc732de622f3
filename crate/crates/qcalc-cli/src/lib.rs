//! Library behind the `qcalc` binary: suites, reports, the acceptance criteria and the CLI.

pub mod acceptance;
pub mod cli;
pub mod oracle;
pub mod report;
pub mod suites;

pub use cli::run;
