//! Configuration, experiments and artifact output behind the `gsqg` binary.

pub mod config;
pub mod datum;
pub mod error;
pub mod experiments;
pub mod output;
pub mod report;
pub mod snapshot;

pub use config::{Datum, Experiment, ExperimentConfig};
pub use error::CliError;
pub use experiments::run;
pub use report::{CriterionReport, Summary};

/// Sizes the global rayon pool from `GSQG_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GSQG_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| CliError::Threads(raw.clone()))?;
    if n == 0 {
        return Err(CliError::Threads(raw));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Threads(format!("{raw} ({e})")))
}
