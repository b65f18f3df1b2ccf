//! Command line and file formats for `opspace-core`.

pub mod cli;
pub mod distance;
pub mod error;
pub mod format;
pub mod report;
pub mod suites;

pub use cli::run;
