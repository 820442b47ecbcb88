//! JSON-configured experiments. Each run writes its CSV and JSON products
//! plus a `manifest.json` with the config digest, the parameters and every
//! embedded check.

pub mod config;
pub mod manifest;
pub mod runner;

pub use config::{Experiment, ExperimentConfig, EXPERIMENTS};
pub use manifest::{Check, Manifest, Relation};
pub use runner::{execute, output_dir, run, run_file, Outcome};
