//! Std companion of `fso-relay-core`: Monte Carlo oracle, scenario files,
//! CSV reports and the `fso-relay` command-line tool.

pub use fso_relay_core as core;

pub mod cli;
pub mod error;
pub mod mcsim;
pub mod report;
pub mod scenario;

pub use error::{Error, Result};
