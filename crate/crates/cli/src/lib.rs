//! Reproducible command-line runs on top of `ponderomotive-core`: config
//! parsing, parallel sweeps, contour extraction and CSV/JSON output.

pub mod commands;
pub mod config;
pub mod contour;
pub mod error;
pub mod output;
pub mod presets;
pub mod selftest;
pub mod sweep;

pub use error::{CliError, Result};
