//! Library half of the `mpctv` binary: image I/O, configuration,
//! experiment plans, and the command implementations, exposed so
//! integration tests can drive the pipeline in-process.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod plan;
pub mod plot;
pub mod testimage;

pub use error::{CliError, Result};
