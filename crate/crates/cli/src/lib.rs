//! Scenario files, report formatting and the built-in verification table used by
//! the `majur` binary.

pub mod error;
pub mod report;
pub mod scenario;
pub mod verify;

pub use error::CliError;
