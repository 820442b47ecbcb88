//! Drive a shipped experiment config from code instead of the `qca` binary.
//!
//!     cargo run --example run_config -- experiments/c06_dispersion.json

use std::path::PathBuf;

use qca_dirac::harness::{execute, ExperimentConfig};

fn main() -> qca_dirac::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments/c04_anticommutation.json"));
    let config = ExperimentConfig::load(&path)?;
    let outcome = execute(&config)?;
    for c in &outcome.checks {
        println!("{} {:<40} {:.3e}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.measured);
    }
    for (name, value) in &outcome.diagnostics {
        println!("     {name:<40} {value:.6}");
    }
    println!("files: {:?}", outcome.files.iter().map(|(n, _)| n).collect::<Vec<_>>());
    Ok(())
}
