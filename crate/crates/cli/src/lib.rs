//! Experiment driver for `spectral-cover`: JSON configurations, the example
//! catalog, task drivers and the acceptance suite.

pub mod catalog;
pub mod checks;
pub mod config;
pub mod report;
pub mod rng;
pub mod tasks;

pub use catalog::{catalog, CatalogEntry};
pub use config::{ExperimentConfig, Task};
pub use report::Report;

/// Runs one task of a configuration and evaluates the assertions that apply.
pub fn run(config: &ExperimentConfig, task: Task) -> anyhow::Result<Report> {
    let out = tasks::run_task(config, task)?;
    Ok(Report::new(config, task, out))
}
