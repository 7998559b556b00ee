//! Sweeps, figure data, single-state reports and the verification suite
//! behind the `cvtele` binary.

pub mod analyze;
pub mod axis;
pub mod columns;
pub mod config;
pub mod error;
pub mod figures;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result};
