//! Multi-threaded trial runner.

use rayon::prelude::*;
use smilab_core::runner::TrialRunner;

/// Environment variable consulted when neither the CLI nor the config set a worker count.
pub const WORKERS_ENV: &str = "SMILAB_WORKERS";

/// Runs trials on a dedicated rayon pool. Results come back in index order,
/// so output does not depend on the number of workers.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// `workers == 0` lets rayon pick one thread per available core.
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl TrialRunner for Parallel {
    fn map_trials<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        self.pool.install(|| (0..trials).into_par_iter().map(f).collect())
    }
}

/// Effective worker count: an explicit non-zero setting wins, then
/// `SMILAB_WORKERS`, then 0 (automatic).
pub fn resolve_workers(configured: usize, env_value: Option<&str>) -> Result<usize, String> {
    if configured > 0 {
        return Ok(configured);
    }
    match env_value.map(str::trim) {
        None | Some("") => Ok(0),
        Some(s) => s
            .parse::<usize>()
            .map_err(|_| format!("{WORKERS_ENV} must be a non-negative integer, got {s:?}")),
    }
}
