//! Command-line entry point: runs JSON-configured experiments.
//!
//! Exit status: 0 when every embedded check passes, 1 when a check fails,
//! 2 when the config cannot be parsed, validated or run.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qca_dirac::harness::{output_dir, run_file, ExperimentConfig, EXPERIMENTS};

#[derive(Parser)]
#[command(name = "qca", version, about = "Fermionic quantum cellular automaton experiments")]
struct Cli {
    /// Suppress per-check output.
    #[arg(long, global = true)]
    quiet: bool,

    /// Worker threads for parallel gate application (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its outputs and manifest.
    Run {
        config: PathBuf,
        /// Overrides the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Parse and bounds-check a config without running it.
    Validate { config: PathBuf },
    /// Print the experiment names accepted in configs.
    ListExperiments,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match cli.command {
        Command::ListExperiments => {
            for (name, summary) in EXPERIMENTS {
                println!("{name:<22} {summary}");
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match ExperimentConfig::load(&config).and_then(|c| c.validate()) {
            Ok(()) => {
                if !cli.quiet {
                    println!("{}: ok", config.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {}: {e}", config.display());
                ExitCode::from(2)
            }
        },
        Command::Run { config, output_dir: dir } => match run_file(&config, dir.as_deref()) {
            Ok(manifest) => {
                if !cli.quiet {
                    for c in &manifest.checks {
                        let mark = if c.passed { "pass" } else { "FAIL" };
                        println!(
                            "{mark}  {:<44} {:.3e} {} {:.3e}",
                            c.name,
                            c.measured,
                            relation(c.relation),
                            c.bound
                        );
                    }
                    let target = ExperimentConfig::load(&config)
                        .map(|c| output_dir(&c, dir.as_deref()))
                        .unwrap_or_default();
                    println!("{} -> {}", manifest.experiment, target.display());
                }
                if manifest.passed {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {}: {e}", config.display());
                ExitCode::from(2)
            }
        },
    }
}

fn relation(r: qca_dirac::harness::Relation) -> &'static str {
    use qca_dirac::harness::Relation::*;
    match r {
        AtMost => "<=",
        AtLeast => ">=",
        Above => ">",
        Equal => "==",
    }
}
