mod compute;
mod config;
mod error;
mod run;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ssf_lab_core::properties::PROPERTIES;

use crate::compute::ComputeArgs;
use crate::config::ScenarioConfig;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "ssf-lab", version, about = "Spectral shift functions and eigenvalue functionals of Hermitian pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenarios of a config and write report.csv, curves/ and failures/.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; all cores when absent.
        #[arg(long)]
        jobs: Option<usize>,
        /// Overrides the config seed.
        #[arg(long, env = "SSF_LAB_SEED")]
        seed: Option<u64>,
    },
    /// Compute one quantity for explicit operands and print it as CSV.
    Compute(ComputeArgs),
    /// Print every property tag with the statement it checks.
    ListProperties,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ssf-lab: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Run { config, out, jobs, seed } => {
            if jobs == Some(0) {
                return Err(CliError::Config("--jobs must be at least 1".into()));
            }
            let mut cfg = ScenarioConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let summary = run::run(&cfg, &out, jobs)?;
            eprintln!("{} rows, {} failing; report in {}", summary.rows, summary.failures, out.join("report.csv").display());
            Ok(if summary.failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Compute(args) => {
            let csv = compute::compute(&args)?;
            match &args.out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ListProperties => {
            for (tag, anchor) in PROPERTIES {
                println!("{tag}\t{anchor}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
