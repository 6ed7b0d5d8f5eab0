use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use spectral_cover_cli::catalog::{catalog, find};
use spectral_cover_cli::config::{ExperimentConfig, Format, Task};
use spectral_cover_cli::run;

#[derive(Parser)]
#[command(name = "spectral-cover", version, about = "Bottom of the spectrum on graphs and their covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// λ₀ of the finite base graph
    Spectrum(RunArgs),
    /// λ₀ of the cover by Dirichlet exhaustion
    CoverSpectrum(RunArgs),
    /// Følner set search and certificate
    Folner(RunArgs),
    /// Random push-down inequality checks
    PushdownCheck(RunArgs),
    /// Følner cutoffs of a base function at each ε
    PullupDemo(RunArgs),
    /// The full acceptance suite
    VerifyAll(RunArgs),
    /// List the built-in entries, or print one as a config
    Catalog { name: Option<String> },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config
    #[arg(long, conflicts_with = "entry")]
    config: Option<PathBuf>,
    /// Built-in catalog entry instead of a config file
    #[arg(long)]
    entry: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Vertex budget for cover windows and state budget for Følner search
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    radius_schedule: Option<Vec<usize>>,
}

fn load(args: &RunArgs, task: Task) -> anyhow::Result<ExperimentConfig> {
    let mut config = match (&args.config, &args.entry) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::parse(&text).with_context(|| format!("in {}", path.display()))?
        }
        (None, Some(name)) => find(name).with_context(|| format!("no catalog entry named {name}"))?.config,
        // verify-all needs no problem description
        (None, None) if task == Task::VerifyAll => find("c4-potential").unwrap().config,
        (None, None) => bail!("give --config PATH or --entry NAME"),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(b) = args.budget {
        config.solver.budget = b;
        config.solver.state_budget = b;
    }
    if let Some(s) = &args.radius_schedule {
        config.solver.radius_schedule = s.clone();
    }
    if let Some(f) = args.format {
        config.output.format = f;
    }
    if let Some(p) = &args.out {
        config.output.path = Some(p.display().to_string());
    }
    Ok(config)
}

fn execute(args: &RunArgs, task: Task) -> anyhow::Result<bool> {
    let config = load(args, task)?;
    let report = run(&config, task)?;
    match &config.output.path {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {path}"))?);
            report.write(config.output.format, &mut w)?;
            w.flush()?;
        }
        None => report.write(config.output.format, io::stdout().lock())?,
    }
    for a in report.assertions.iter().filter(|a| !a.passed) {
        eprintln!("assertion failed: {} {:?} {} (actual {:?})", a.metric, a.op, a.value, a.actual);
    }
    if task == Task::VerifyAll {
        for o in report.result.as_array().into_iter().flatten() {
            let status = if o["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            eprintln!("{status} {} {}: {}", o["id"], o["title"].as_str().unwrap_or(""), o["detail"].as_str().unwrap_or(""));
        }
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, args) = match &cli.command {
        Command::Spectrum(a) => (Task::Spectrum, a),
        Command::CoverSpectrum(a) => (Task::CoverSpectrum, a),
        Command::Folner(a) => (Task::Folner, a),
        Command::PushdownCheck(a) => (Task::PushdownCheck, a),
        Command::PullupDemo(a) => (Task::PullupDemo, a),
        Command::VerifyAll(a) => (Task::VerifyAll, a),
        Command::Catalog { name: None } => {
            for e in catalog() {
                println!("{:<24} {:<15} {}", e.name, e.config.task.to_string(), e.description);
            }
            return ExitCode::SUCCESS;
        }
        Command::Catalog { name: Some(name) } => {
            return match find(name) {
                Some(e) => {
                    println!("{}", e.config.to_json());
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("error: no catalog entry named {name}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match execute(args, task) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
