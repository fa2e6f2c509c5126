//! Config-driven experiments over `geogate`: recipe synthesis, decoherence and
//! systematic-error sweeps, drive-strength scans on a transmon, population dynamics and
//! the parametric two-qubit gate. Results are written as CSV plus JSON metadata.

pub mod config;
pub mod error;
pub mod experiments;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{BenchError, Result};
pub use experiments::{run, Command, Outcome, RunOptions};
pub use report::{Cell, SweepReport};
