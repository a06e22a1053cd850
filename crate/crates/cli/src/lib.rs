//! Command-line front end for `coupled-tls`: figure reproduction, scenario
//! sweeps and verification suites.

pub mod commands;
pub mod error;
pub mod figures;
pub mod output;
pub mod scenario;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result, ValidationError};
