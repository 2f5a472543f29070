//! File formats, reports and command-line front end for `dqds-core`.

pub mod cli;
pub mod demo;
pub mod error;
pub mod io;
pub mod report;
pub mod simulate;

pub use error::{CliError, Result};
