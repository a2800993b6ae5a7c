//! Run-level parallelism. Every run owns its ChaCha stream, so results do
//! not depend on the thread count.

use gdrq_core::encoding::NucleusConfig;
use gdrq_core::experiment::{quantum_plan, run_quantum_with_plan, MadSeries, RunRecord};
use rayon::prelude::*;

use crate::error::CliError;

pub const THREADS_ENV: &str = "GDRQ_THREADS";

/// Thread count from `GDRQ_THREADS`; `None` means rayon's default.
pub fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Validation(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

fn pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

/// Runs `0..runs` in parallel and returns them in index order. The first
/// failing run by index is reported.
pub fn run_many(config: &NucleusConfig, runs: u32, seed: u64) -> Result<Vec<RunRecord>, CliError> {
    let plan = quantum_plan(config)?;
    let results: Vec<_> = pool()?.install(|| {
        (0..runs as u64)
            .into_par_iter()
            .map(|i| run_quantum_with_plan(config, &plan, seed, i))
            .collect()
    });
    results
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.map_err(|source| CliError::Run { run: i as u64, source }))
        .collect()
}

/// Parallel counterpart of [`gdrq_core::experiment::error_vs_runs`].
pub fn error_vs_runs(
    config: &NucleusConfig,
    runs: u32,
    seed: u64,
) -> Result<(Vec<RunRecord>, MadSeries), CliError> {
    if runs < 2 {
        return Err(CliError::Validation("error study needs at least two runs".into()));
    }
    let records = run_many(config, runs, seed)?;
    let e0: Vec<f64> = records.iter().map(|r| r.e0).collect();
    let series = MadSeries::from_e0(&e0)?;
    Ok((records, series))
}
