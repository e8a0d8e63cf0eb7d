//! Configuration-driven runner for the `mbring` simulator: figure presets,
//! parameter sweeps, CSV and SVG output with a checksummed manifest.

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod plot;
pub mod preset;

pub use config::{parse_assignment, parse_sweep_axis, Emit, Outputs, Pipeline, RunConfig};
pub use error::{CliError, CliResult};
pub use output::{RunManifest, RunRecord, Status};
pub use pipeline::{compute, run, run_all};
pub use preset::{preset, Preset, PRESET_NAMES};
