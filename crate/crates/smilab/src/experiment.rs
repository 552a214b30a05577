//! Dispatch from a validated config to the core checks.

use std::time::Instant;

use smilab_core::ensembles::{density_bound_check, SeedPath};
use smilab_core::identities::{identity_suite, verify_entry_tail_pointwise};
use smilab_core::runner::TrialRunner;
use smilab_core::tail::{
    check_ginibre_lower, check_hagelstein, check_sst_bound, check_theorem_bound, counterexample_growth,
};

use crate::config::{ConfigError, Experiment, ExperimentConfig, DEFAULT_CASES, DEFAULT_COMPONENTS};
use crate::config::{DEFAULT_ENTRY, DEFAULT_N_MAX, DEFAULT_SAMPLES};
use crate::report::{Payload, RunReport, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Core(#[from] smilab_core::Error),
}

/// Runs the experiment described by `config` on `runner`.
pub fn run<R: TrialRunner>(config: &ExperimentConfig, runner: &R) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let seed = config.master_seed();
    let trials = config.trials();
    let payload = match config.experiment {
        Experiment::TheoremTail => {
            let spec = config.ensemble_spec()?;
            Payload::Tail(check_theorem_bound(runner, &spec, seed, trials, &config.t_grid())?)
        }
        Experiment::EntryTail => {
            let spec = config.ensemble_spec()?;
            let [i, j] = config.entry.unwrap_or(DEFAULT_ENTRY);
            Payload::Tail(verify_entry_tail_pointwise(
                runner,
                &spec,
                i - 1,
                j - 1,
                seed,
                trials,
                &config.t_grid(),
            )?)
        }
        Experiment::SstTail => {
            let spec = config.ensemble_spec()?;
            Payload::Tail(check_sst_bound(runner, spec.n, &spec.shift, seed, trials, &config.t_grid())?)
        }
        Experiment::GinibreLower => {
            let spec = config.ensemble_spec()?;
            Payload::GinibreLower(check_ginibre_lower(runner, spec.n, seed, trials)?)
        }
        Experiment::Counterexample => {
            let spec = config.ensemble_spec()?;
            let d_list = config.d_list.clone().unwrap_or_default();
            Payload::Counterexample(counterexample_growth(runner, spec.n, &d_list, seed, trials)?)
        }
        Experiment::Hagelstein => Payload::Hagelstein(check_hagelstein(
            runner,
            config.components.unwrap_or(DEFAULT_COMPONENTS),
            seed,
            trials,
        )?),
        Experiment::IdentitySuite => Payload::IdentitySuite(identity_suite(
            config.n_max.unwrap_or(DEFAULT_N_MAX),
            config.cases.unwrap_or(DEFAULT_CASES),
            seed,
        )?),
        Experiment::DensityCheck => {
            let spec = config.ensemble_spec()?;
            Payload::Density(density_bound_check(
                &spec,
                config.samples.unwrap_or(DEFAULT_SAMPLES),
                SeedPath::new(seed, 0),
            )?)
        }
    };
    let (verdict, excluded_draws) = match &payload {
        Payload::Tail(r) => (Verdict::from_passed(r.passed), r.excluded),
        Payload::Counterexample(r) => {
            (Verdict::from_passed(r.passed), r.rows.iter().map(|row| row.excluded).sum())
        }
        Payload::Hagelstein(r) => (Verdict::from_passed(r.passed), 0),
        Payload::GinibreLower(r) => (
            r.passed.map_or(Verdict::ReportOnly, Verdict::from_passed),
            r.excluded,
        ),
        Payload::IdentitySuite(r) => (Verdict::from_passed(r.passed), 0),
        Payload::Density(r) => (Verdict::from_passed(r.passed), 0),
    };
    Ok(RunReport {
        config: config.clone(),
        payload,
        wall_time: start.elapsed().as_secs_f64(),
        excluded_draws,
        verdict,
    })
}
