//! Execution strategy for Monte Carlo trial loops.
//!
//! A trial is a pure function of its index. Runners must return results in
//! index order, which makes every downstream reduction independent of how the
//! work was scheduled.

use alloc::vec::Vec;

pub trait TrialRunner {
    fn map_trials<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send;
}

/// Runs trials one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl TrialRunner for Sequential {
    fn map_trials<T, F>(&self, trials: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        (0..trials).map(f).collect()
    }
}
