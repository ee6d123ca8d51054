//! Standard-library companion of `metadist-core`: absorption-table and result
//! file formats, flat config files, a rayon-parallel nested Monte Carlo
//! driver, parameter sweeps, the validation suite and the `metadist` binary.

pub mod cli;
pub mod config;
pub mod error;
pub mod parallel;
pub mod record;
pub mod sweep;
pub mod table;
pub mod validate;

pub use error::{CliError, CliResult};
pub use record::{Column, RunRecord};
pub use sweep::SweepSpec;

/// Version string stamped into every output file.
pub fn version_string() -> String {
    format!("metadist {}", env!("CARGO_PKG_VERSION"))
}
