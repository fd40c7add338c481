//! Config-driven experiments that write deterministic CSV/JSON artifacts.

mod config;
mod presets;
mod run;

pub use config::{ConfigOverrides, DataKind, ExperimentConfig, TimeGridKind};
pub use presets::{preset, PRESETS};
pub use run::{
    artifact_meta, initial_datum, oracle_for, pointwise_relative_error, run, run_calibrate, run_depend,
    run_radius, run_solve, run_verify, RunOutcome, RunStatus, Subcommand, ARTIFACT_FORMAT_VERSION, EPSILON0_SWEEP,
};
