//! `smilab run` / `smilab validate`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, ExperimentConfig};
use crate::experiment::{run, RunError};
use crate::parallel::{resolve_workers, Parallel, WORKERS_ENV};
use crate::report::Verdict;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "smilab", version, about = "Monte Carlo checks for inverses of randomly perturbed matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment and write `<experiment>.csv` / `.json` under `output_path`.
    Run(RunArgs),
    /// Parse and validate a config, then print the normalised form.
    Validate(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: PathBuf,
    /// Worker threads; overrides the config and SMILAB_WORKERS.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Overrides `master_seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, u8> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", args.config.display());
        EXIT_IO
    })?;
    let mut config = parse_config(&text).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_CONFIG
    })?;
    if let Some(w) = args.workers {
        config.workers = Some(w);
    }
    if let Some(s) = args.seed {
        config.master_seed = Some(s);
    }
    Ok(config)
}

fn execute_run(args: &RunArgs) -> Result<u8, u8> {
    let config = load(args)?;
    let env = std::env::var(WORKERS_ENV).ok();
    let workers = resolve_workers(config.workers.unwrap_or(0), env.as_deref()).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_CONFIG
    })?;
    let runner = Parallel::new(workers).map_err(|e| {
        eprintln!("error: cannot start worker pool: {e}");
        EXIT_IO
    })?;
    let report = run(&config, &runner).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            RunError::Config(_) | RunError::Core(_) => EXIT_CONFIG,
        }
    })?;
    let dir = Path::new(config.output_path());
    let written = report.write_to(dir).map_err(|e| {
        eprintln!("error: cannot write to {}: {e}", dir.display());
        EXIT_IO
    })?;
    for path in &written {
        println!("wrote {}", path.display());
    }
    println!(
        "{} {} ({} excluded, {:.2}s, {} workers)",
        config.experiment.name(),
        report.verdict.as_str(),
        report.excluded_draws,
        report.wall_time,
        runner.workers()
    );
    Ok(match report.verdict {
        Verdict::Pass | Verdict::ReportOnly => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
    })
}

fn execute_validate(args: &RunArgs) -> Result<u8, u8> {
    let config = load(args)?;
    println!("{}", serde_json::to_string_pretty(&config).expect("config serialises"));
    Ok(EXIT_PASS)
}

pub fn execute(cli: &Cli) -> ExitCode {
    let code = match &cli.command {
        Command::Run(args) => execute_run(args),
        Command::Validate(args) => execute_validate(args),
    };
    ExitCode::from(code.unwrap_or_else(|c| c))
}

