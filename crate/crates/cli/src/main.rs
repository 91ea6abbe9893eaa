use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use fewbound_cli::{Budget, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "fewbound",
    version,
    about = "Few-body ground states and lower bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Variational ground state of the configured system.
    Solve(Common),
    /// All applicable lower bounds for the configured system.
    Bound(Common),
    /// Ratios of exact energies to bounds for short-range potentials.
    Table1(Common),
    /// Bound comparison for power-law potentials.
    Fig1(Common),
    /// Few-electron quantum dots.
    Qdot(Common),
    /// One-body levels and cumulated energies.
    Spectrum(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    budget: Option<Budget>,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (experiment, common) = match cli.command {
        Command::Solve(c) => (Experiment::Solve, c),
        Command::Bound(c) => (Experiment::Bound, c),
        Command::Table1(c) => (Experiment::Table1, c),
        Command::Fig1(c) => (Experiment::Fig1, c),
        Command::Qdot(c) => (Experiment::Qdot, c),
        Command::Spectrum(c) => (Experiment::Spectrum, c),
    };
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(experiment),
    };
    if config.experiment != experiment {
        anyhow::bail!(
            "the config file describes `{}`, not `{experiment}`",
            config.experiment
        );
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(out) = common.out {
        config.out = out;
    }
    if let Some(budget) = common.budget {
        config.budget = budget;
    }
    let (csv, json) = fewbound_cli::run(&config)?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}
