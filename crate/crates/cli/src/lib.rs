//! Experiment runner for the few-body solver and lower bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod energies;
pub mod experiments;
pub mod output;
pub mod qdot;

pub use config::{Budget, Experiment, ExperimentConfig};
pub use energies::EnergyService;

use std::path::PathBuf;

use anyhow::Result;

/// Runs the configured experiment and writes `<out>/<experiment>.csv` and
/// `<out>/<experiment>.json`.
pub fn run(config: &ExperimentConfig) -> Result<(PathBuf, PathBuf)> {
    let solver = config.solver_config()?;
    let service = EnergyService::new(solver.clone());
    let outcome = match config.experiment {
        Experiment::Table1 => experiments::run_table1(config, &service)?,
        Experiment::Fig1 => experiments::run_fig1(config, &service)?,
        Experiment::Qdot => experiments::run_qdot(config, &service)?,
        Experiment::Solve => experiments::run_solve(config, &service)?,
        Experiment::Bound => experiments::run_bound(config, &service)?,
        Experiment::Spectrum => experiments::run_spectrum(config)?,
    };
    let meta = output::RunMeta {
        experiment: config.experiment.to_string(),
        seed: config.seed,
        budget: config.budget.to_string(),
        solver,
        convention: outcome.convention,
    };
    let stem = config.experiment.to_string();
    let csv = output::write_csv(&config.out, &stem, &meta, &outcome.table)?;
    let json = output::write_report(&config.out, &stem, &meta, &outcome.report)?;
    Ok((csv, json))
}
