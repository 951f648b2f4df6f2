//! `ssf-lab run`: evaluates every (scenario, trial) pair in parallel, then
//! writes all outputs in scenario and trial order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::scenario::{evaluate, threshold_draws, TrialOutcome};

pub const REPORT_HEADER: &str = "scenario,property,trials,worst_gap,tolerance,pass,witness_file";

pub struct RunSummary {
    pub rows: usize,
    pub failures: usize,
}

pub fn run(cfg: &ScenarioConfig, out: &Path, jobs: Option<usize>) -> Result<RunSummary, CliError> {
    let tasks: Vec<(usize, usize)> =
        cfg.scenarios.iter().enumerate().flat_map(|(i, s)| (0..s.params.trials).map(move |t| (i, t))).collect();
    let draws: Vec<Vec<f64>> = cfg.scenarios.iter().enumerate().map(|(i, s)| threshold_draws(cfg.seed, i, s.params.threshold_draws)).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<TrialOutcome, CliError>> =
        pool.install(|| tasks.par_iter().map(|&(i, t)| evaluate(&cfg.scenarios[i], i, t, cfg.seed, &draws[i])).collect());

    let mut outcomes = Vec::with_capacity(results.len());
    for r in results {
        outcomes.push(r?);
    }

    fs::create_dir_all(out.join("curves"))?;
    fs::create_dir_all(out.join("failures"))?;
    let mut csv = String::from(REPORT_HEADER);
    csv.push('\n');
    let mut failures = 0;
    for (&(i, t), o) in tasks.iter().zip(&outcomes) {
        let s = &cfg.scenarios[i];
        let r = &o.report;
        let witness_file = if r.pass {
            String::new()
        } else {
            failures += 1;
            let rel = format!("failures/{}-{t}.json", s.name);
            fs::write(out.join(&rel), serde_json::to_string_pretty(&r.witness).expect("witness serializes"))?;
            rel
        };
        let _ = writeln!(csv, "{},{},{},{:e},{:e},{},{}", s.name, s.property, r.trials, r.worst_gap, r.tolerance, r.pass, witness_file);
        for (name, body) in &o.curves {
            fs::write(out.join("curves").join(name), body)?;
        }
    }
    fs::write(out.join("report.csv"), csv)?;
    Ok(RunSummary { rows: outcomes.len(), failures })
}
