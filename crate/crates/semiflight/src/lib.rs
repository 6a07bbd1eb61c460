//! Experiment runner for `semiflight-core`: configuration, deterministic
//! parallel sampling, law verification and CSV / JSON-lines output.

pub mod config;
pub mod experiments;
pub mod laws;
pub mod oracles;
pub mod output;
pub mod parallel;

pub use config::{ConfigError, Experiment, ExperimentConfig};
pub use experiments::{run, RunError, RunOutcome};
