//! Scenario configuration, presets and runner for the `spinboson` tool.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::{Axis, Config, Job, Observable, Scenario, Solver, SweepSpec};
pub use error::{CliError, Result};
pub use output::{Manifest, Table};
pub use presets::{Preset, PRESETS};
pub use runner::{render, run, simulate, thread_pool, write_kernels};
