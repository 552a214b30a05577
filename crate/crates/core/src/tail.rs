//! Weak-L<sub>p</sub> estimation and confidence-bounded tail checks.
//!
//! A Monte Carlo run can refute an inequality `P{X > t} <= bound(t)` but never
//! prove it. Every check here therefore fails only when the one-sided 99.9%
//! Clopper-Pearson *lower* bound of the empirical probability exceeds the
//! (capped) theoretical bound.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_distr::{Cauchy, Distribution};

use crate::binomial::{clopper_pearson, BinomialInterval, CONFIDENCE};
use crate::ensembles::{sample_general, sample_matrix, EnsembleSpec, Family, SeedPath, ShiftSpec};
use crate::matrix::{self, SymMatrix};
use crate::runner::TrialRunner;
use crate::{Error, Result};

/// Smallest trial count accepted by the tail checks.
pub const MIN_TAIL_TRIALS: u64 = 1_000;

/// Largest tolerated fraction of numerically singular draws for continuous laws.
pub const MAX_EXCLUSION_RATE: f64 = 1e-3;

/// Constant in the operator-norm tail bound `P{‖A⁻¹‖ >= n² t} <= 8K/t`.
pub const THEOREM_CONSTANT: f64 = 8.0;
/// Constant in the entrywise bound `P{|(A⁻¹)ᵢⱼ| > t} <= 2K/t`.
pub const ENTRY_CONSTANT: f64 = 2.0;
/// Constant in the Gaussian (Ginibre) bound `P{‖(D+G)⁻¹‖ >= t√n} <= 2.35/t`.
pub const SST_CONSTANT: f64 = 2.35;
/// Constant in `‖(Σ Xᵢ²)^{1/2}‖_{1,∞} <= 4 Σ ‖Xᵢ‖_{1,∞}`.
pub const HAGELSTEIN_CONSTANT: f64 = 4.0;
/// Slack allowed on the Hagelstein comparison for estimator noise.
pub const HAGELSTEIN_SLACK: f64 = 1.05;

/// Nonnegative Monte Carlo observations plus the number of dropped draws.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleSet {
    pub values: Vec<f64>,
    pub excluded: u64,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, excluded: 0 }
    }

    /// Collects trial outcomes in order; `None` marks a degenerate draw.
    pub fn from_outcomes<I: IntoIterator<Item = Option<f64>>>(outcomes: I) -> Self {
        let mut out = Self::default();
        for o in outcomes {
            match o {
                Some(v) => out.values.push(v),
                None => out.excluded += 1,
            }
        }
        out
    }

    pub fn count(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn exclusion_rate(&self) -> f64 {
        let total = self.count() + self.excluded;
        if total == 0 {
            0.0
        } else {
            self.excluded as f64 / total as f64
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            excluded: self.excluded,
        }
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Empirical weak-L<sub>p</sub> norm `sup_t t · P{|X| > t}^{1/p}`.
///
/// The empirical functional is maximised just below a sample point, so with
/// values sorted ascending this is `max_k v[k] · ((N - k)/N)^{1/p}`. The
/// supremum only runs over thresholds exceeded by at least `⌈√N⌉` samples:
/// beyond that the estimate is driven by a handful of extreme order
/// statistics and, for heavy tails, has no finite mean.
pub fn weak_lp_norm(samples: &SampleSet, p: f64) -> Result<f64> {
    if samples.values.is_empty() {
        return Err(Error::Domain("weak L_p norm of an empty sample set".into()));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain(format!("weak L_p norm needs 0 < p < inf, got {p}")));
    }
    let sorted: Vec<f64> = {
        let mut v: Vec<f64> = samples.values.iter().map(|v| v.abs()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let n = sorted.len() as f64;
    let inv_p = 1.0 / p;
    let min_tail = min_tail_count(sorted.len());
    let best = sorted
        .iter()
        .enumerate()
        .take(sorted.len() + 1 - min_tail)
        .map(|(k, &v)| {
            let frac = (n - k as f64) / n;
            let weight = if p == 1.0 { frac } else { libm::pow(frac, inv_p) };
            v * weight
        })
        .fold(0.0f64, f64::max);
    Ok(best)
}

/// Fewest exceedances a weak-norm threshold may have: `⌈√N⌉`.
pub fn min_tail_count(n: usize) -> usize {
    let r = libm::ceil(libm::sqrt(n as f64)) as usize;
    r.clamp(1, n.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailPoint {
    pub exceed: u64,
    pub count: u64,
    pub estimate: f64,
    pub interval: BinomialInterval,
}

/// `#{v > t} / count` with one-sided 99.9% exact bounds on each side.
pub fn empirical_tail(samples: &SampleSet, t: f64) -> TailPoint {
    let exceed = samples.values.iter().filter(|&&v| v > t).count() as u64;
    tail_point(exceed, samples.count())
}

fn tail_point(exceed: u64, count: u64) -> TailPoint {
    let estimate = if count == 0 { 0.0 } else { exceed as f64 / count as f64 };
    TailPoint {
        exceed,
        count,
        estimate,
        interval: clopper_pearson(exceed, count, CONFIDENCE),
    }
}

/// Tail probabilities on a grid of `t`, checked against a theoretical bound.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailReport {
    pub bound_name: String,
    pub t_grid: Vec<f64>,
    /// The value each sample is compared against for the corresponding `t`.
    pub thresholds: Vec<f64>,
    pub exceed_counts: Vec<u64>,
    /// Number of non-excluded draws.
    pub trials: u64,
    pub excluded: u64,
    pub empirical: Vec<f64>,
    pub ci_lower: Vec<f64>,
    pub ci_upper: Vec<f64>,
    pub bound: Vec<f64>,
    pub capped_bound: Vec<f64>,
    pub point_pass: Vec<bool>,
    /// `false` when a continuous law produced too many degenerate draws.
    pub exclusions_ok: bool,
    pub passed: bool,
}

/// How a tail report compares samples with thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exceedance {
    /// Count `v > threshold`.
    Strict,
    /// Count `v >= threshold`.
    Inclusive,
}

impl TailReport {
    /// Builds a report from raw samples.
    ///
    /// `threshold(t)` maps a grid value to the cutoff applied to the samples and
    /// `bound(t)` gives the claimed upper bound on the exceedance probability.
    /// When `max_exclusion_rate` is set, a higher rate of excluded draws fails the report.
    pub fn evaluate(
        bound_name: &str,
        samples: &SampleSet,
        t_grid: &[f64],
        mode: Exceedance,
        threshold: impl Fn(f64) -> f64,
        bound: impl Fn(f64) -> f64,
        max_exclusion_rate: Option<f64>,
    ) -> Self {
        let sorted = samples.sorted();
        let count = sorted.len() as u64;
        let mut report = Self {
            bound_name: bound_name.to_string(),
            t_grid: t_grid.to_vec(),
            thresholds: Vec::with_capacity(t_grid.len()),
            exceed_counts: Vec::with_capacity(t_grid.len()),
            trials: count,
            excluded: samples.excluded,
            empirical: Vec::with_capacity(t_grid.len()),
            ci_lower: Vec::with_capacity(t_grid.len()),
            ci_upper: Vec::with_capacity(t_grid.len()),
            bound: Vec::with_capacity(t_grid.len()),
            capped_bound: Vec::with_capacity(t_grid.len()),
            point_pass: Vec::with_capacity(t_grid.len()),
            exclusions_ok: max_exclusion_rate.is_none_or(|r| samples.exclusion_rate() <= r),
            passed: false,
        };
        for &t in t_grid {
            let cut = threshold(t);
            let below = match mode {
                Exceedance::Strict => sorted.partition_point(|&v| v <= cut),
                Exceedance::Inclusive => sorted.partition_point(|&v| v < cut),
            };
            let point = tail_point(count - below as u64, count);
            let b = bound(t);
            let capped = b.min(1.0);
            report.thresholds.push(cut);
            report.exceed_counts.push(point.exceed);
            report.empirical.push(point.estimate);
            report.ci_lower.push(point.interval.lower);
            report.ci_upper.push(point.interval.upper);
            report.bound.push(b);
            report.capped_bound.push(capped);
            report.point_pass.push(point.interval.lower <= capped);
        }
        report.passed = report.exclusions_ok && report.point_pass.iter().all(|&p| p);
        report
    }
}

fn require_trials(trials: u64) -> Result<()> {
    if trials < MIN_TAIL_TRIALS {
        return Err(Error::Config(format!(
            "tail checks need at least {MIN_TAIL_TRIALS} trials, got {trials}"
        )));
    }
    Ok(())
}

pub fn validate_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::Config("t_grid must not be empty".into()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::Config("t_grid values must be positive and finite".into()));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("t_grid must be strictly increasing".into()));
    }
    Ok(())
}

fn require_continuous(spec: &EnsembleSpec) -> Result<()> {
    spec.validate()?;
    if !spec.family.is_continuous_symmetric() {
        return Err(Error::UnsupportedFamily(spec.family.name()));
    }
    Ok(())
}

/// Operator and Hilbert-Schmidt norms of `A⁻¹` for one draw, `None` when singular.
fn inverse_norms(a: &SymMatrix) -> Option<(f64, f64)> {
    let spectrum = matrix::sym_eigenvalues(a);
    if spectrum.is_numerically_singular() {
        return None;
    }
    let inv = matrix::general_inverse(a.as_matrix())?;
    Some((1.0 / spectrum.min_abs(), matrix::hs_norm(&inv)))
}

/// Per-trial `‖A⁻¹‖` and `‖A⁻¹‖_HS` for a symmetric ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSamples {
    pub operator: SampleSet,
    pub hilbert_schmidt: SampleSet,
}

pub fn inverse_norm_samples<R: TrialRunner>(
    runner: &R,
    spec: &EnsembleSpec,
    master_seed: u64,
    trials: u64,
) -> Result<NormSamples> {
    require_continuous(spec)?;
    let outcomes = runner.map_trials(trials, |t| {
        sample_matrix(spec, SeedPath::new(master_seed, t))
            .ok()
            .and_then(|a| inverse_norms(&a))
    });
    Ok(NormSamples {
        operator: SampleSet::from_outcomes(outcomes.iter().map(|o| o.map(|p| p.0))),
        hilbert_schmidt: SampleSet::from_outcomes(outcomes.iter().map(|o| o.map(|p| p.1))),
    })
}

/// `P{‖A⁻¹‖ >= n² t} <= 8K/t` for a symmetric continuous ensemble `A = D + R`.
pub fn check_theorem_bound<R: TrialRunner>(
    runner: &R,
    spec: &EnsembleSpec,
    master_seed: u64,
    trials: u64,
    t_grid: &[f64],
) -> Result<TailReport> {
    require_continuous(spec)?;
    require_trials(trials)?;
    validate_t_grid(t_grid)?;
    let outcomes = runner.map_trials(trials, |t| {
        sample_matrix(spec, SeedPath::new(master_seed, t))
            .ok()
            .and_then(|a| matrix::inverse_op_norm(&a).ok())
    });
    let samples = SampleSet::from_outcomes(outcomes);
    let n2 = (spec.n * spec.n) as f64;
    let k = spec.density_bound;
    Ok(TailReport::evaluate(
        "8K/t",
        &samples,
        t_grid,
        Exceedance::Inclusive,
        |t| n2 * t,
        |t| THEOREM_CONSTANT * k / t,
        Some(MAX_EXCLUSION_RATE),
    ))
}

/// Samples of `‖(D + G)⁻¹‖` for Ginibre `G`.
pub fn ginibre_inverse_norms<R: TrialRunner>(
    runner: &R,
    n: usize,
    shift: &ShiftSpec,
    master_seed: u64,
    trials: u64,
) -> Result<SampleSet> {
    let spec = EnsembleSpec::new(Family::Ginibre, 1.0, n, shift.clone())?;
    let outcomes = runner.map_trials(trials, |t| {
        sample_general(&spec, SeedPath::new(master_seed, t))
            .ok()
            .and_then(|m| matrix::smallest_singular_value(&m).ok())
            .map(|s| 1.0 / s)
    });
    Ok(SampleSet::from_outcomes(outcomes))
}

/// `P{‖(D + G)⁻¹‖ >= t√n} <= 2.35/t` for a real Ginibre matrix `G`.
pub fn check_sst_bound<R: TrialRunner>(
    runner: &R,
    n: usize,
    shift: &ShiftSpec,
    master_seed: u64,
    trials: u64,
    t_grid: &[f64],
) -> Result<TailReport> {
    require_trials(trials)?;
    validate_t_grid(t_grid)?;
    let samples = ginibre_inverse_norms(runner, n, shift, master_seed, trials)?;
    let root_n = libm::sqrt(n as f64);
    Ok(TailReport::evaluate(
        "2.35/t",
        &samples,
        t_grid,
        Exceedance::Inclusive,
        |t| root_n * t,
        |t| SST_CONSTANT / t,
        Some(MAX_EXCLUSION_RATE),
    ))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HagelsteinReport {
    pub components: usize,
    pub trials: u64,
    /// Weak-L1 estimate of `(Σ Xᵢ²)^{1/2}`.
    pub left: f64,
    /// `4 Σ ‖Xᵢ‖_{1,∞}` from per-component estimates.
    pub right: f64,
    pub per_component: Vec<f64>,
    pub ratio: f64,
    pub passed: bool,
}

/// Compares the weak-L1 norm of the Euclidean aggregate of `components`
/// i.i.d. standard Cauchy variables with four times the sum of their weak-L1 norms.
pub fn check_hagelstein<R: TrialRunner>(
    runner: &R,
    components: usize,
    master_seed: u64,
    trials: u64,
) -> Result<HagelsteinReport> {
    if components == 0 {
        return Err(Error::Config("hagelstein check needs at least one component".into()));
    }
    if trials == 0 {
        return Err(Error::Config("hagelstein check needs at least one trial".into()));
    }
    let cauchy = Cauchy::new(0.0, 1.0).map_err(|e| Error::Config(format!("{e}")))?;
    let draws = runner.map_trials(trials, |t| {
        let mut rng = SeedPath::new(master_seed, t).rng();
        (0..components).map(|_| cauchy.sample(&mut rng)).collect::<Vec<f64>>()
    });
    let aggregate = SampleSet::new(
        draws
            .iter()
            .map(|xs| libm::sqrt(xs.iter().map(|x| x * x).sum()))
            .collect(),
    );
    let left = weak_lp_norm(&aggregate, 1.0)?;
    let mut per_component = Vec::with_capacity(components);
    for c in 0..components {
        let column = SampleSet::new(draws.iter().map(|xs| xs[c]).collect());
        per_component.push(weak_lp_norm(&column, 1.0)?);
    }
    let right = HAGELSTEIN_CONSTANT * per_component.iter().sum::<f64>();
    let ratio = left / right;
    Ok(HagelsteinReport {
        components,
        trials,
        left,
        right,
        per_component,
        ratio,
        passed: left <= HAGELSTEIN_SLACK * right,
    })
}

/// Minimum exceedance fraction at the calibrated threshold.
pub const COUNTEREXAMPLE_MIN_FRACTION: f64 = 0.4;
/// Allowed spread `max m(d) / min m(d)` of the scaled medians.
pub const COUNTEREXAMPLE_BAND: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleRow {
    pub d: f64,
    pub trials: u64,
    pub excluded: u64,
    pub median_norm: f64,
    /// `median · √n / d`.
    pub scaled_median: f64,
    /// 60th percentile of `‖(D+R)⁻¹‖`, i.e. the level exceeded by 40% of draws.
    pub quantile_60: f64,
    pub exceed_fraction: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexampleReport {
    pub n: usize,
    /// Calibrated constant: half of the scaled median at the smallest `d`.
    pub c0: f64,
    pub rows: Vec<CounterexampleRow>,
    /// `max m(d) / min m(d)`.
    pub band_ratio: f64,
    pub band_ok: bool,
    pub passed: bool,
}

fn median_of_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn quantile_of_sorted(v: &[f64], q: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let idx = libm::ceil(q * v.len() as f64) as usize;
    v[idx.saturating_sub(1).min(v.len() - 1)]
}

/// Growth of `‖(D+R)⁻¹‖` with `d` for lazy Rademacher `R` and `D = diag(0, d, ..., d)`.
///
/// Trial `t` uses the same random part `R` for every `d` (common random numbers),
/// so differences between rows come from the shift alone.
pub fn counterexample_growth<R: TrialRunner>(
    runner: &R,
    n: usize,
    d_list: &[f64],
    master_seed: u64,
    trials: u64,
) -> Result<CounterexampleReport> {
    validate_d_list(d_list)?;
    if n < 2 {
        return Err(Error::Config("counterexample needs n >= 2".into()));
    }
    if trials == 0 {
        return Err(Error::Config("counterexample needs at least one trial".into()));
    }
    let root_n = libm::sqrt(n as f64);
    let mut sorted_by_d = Vec::with_capacity(d_list.len());
    for &d in d_list {
        let spec = EnsembleSpec::new(Family::LazyRademacher, 1.0, n, ShiftSpec::CounterexampleDiag(d))?;
        let outcomes = runner.map_trials(trials, |t| {
            sample_matrix(&spec, SeedPath::new(master_seed, t))
                .ok()
                .and_then(|a| matrix::inverse_op_norm(&a).ok())
        });
        let set = SampleSet::from_outcomes(outcomes);
        sorted_by_d.push((d, set.sorted(), set.excluded));
    }
    let first = &sorted_by_d[0];
    let c0 = 0.5 * median_of_sorted(&first.1) * root_n / first.0;
    let rows: Vec<CounterexampleRow> = sorted_by_d
        .iter()
        .map(|(d, sorted, excluded)| {
            let median = median_of_sorted(sorted);
            let cut = c0 * d / root_n;
            let above = sorted.len() - sorted.partition_point(|&v| v < cut);
            let exceed_fraction = above as f64 / sorted.len().max(1) as f64;
            CounterexampleRow {
                d: *d,
                trials: sorted.len() as u64,
                excluded: *excluded,
                median_norm: median,
                scaled_median: median * root_n / d,
                quantile_60: quantile_of_sorted(sorted, 0.6),
                exceed_fraction,
                pass: exceed_fraction >= COUNTEREXAMPLE_MIN_FRACTION,
            }
        })
        .collect();
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
        (lo.min(r.scaled_median), hi.max(r.scaled_median))
    });
    let band_ratio = hi / lo;
    let band_ok = band_ratio <= COUNTEREXAMPLE_BAND;
    let passed = band_ok && rows.iter().all(|r| r.pass);
    Ok(CounterexampleReport {
        n,
        c0,
        rows,
        band_ratio,
        band_ok,
        passed,
    })
}

pub fn validate_d_list(d_list: &[f64]) -> Result<()> {
    if d_list.len() < 3 {
        return Err(Error::Config(format!(
            "d_list needs at least 3 values, got {}",
            d_list.len()
        )));
    }
    if d_list.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::Config("d_list values must be positive and finite".into()));
    }
    if d_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("d_list must be strictly increasing".into()));
    }
    if d_list[d_list.len() - 1] / d_list[0] < 100.0 {
        return Err(Error::Config("d_list must span at least two decades".into()));
    }
    Ok(())
}

/// Multiple of `√n` used as the lower threshold for `‖G⁻¹‖`.
pub const GINIBRE_LOWER_FACTOR: f64 = 0.1;
/// Required fraction of draws above the threshold.
pub const GINIBRE_LOWER_FRACTION: f64 = 0.9;
/// Below this dimension the report carries no verdict.
pub const GINIBRE_LOWER_MIN_N: usize = 20;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GinibreLowerReport {
    pub n: usize,
    pub trials: u64,
    pub excluded: u64,
    pub threshold: f64,
    pub fraction: f64,
    pub interval: BinomialInterval,
    /// `None` for `n` below the calibrated regime.
    pub passed: Option<bool>,
}

/// Estimates `P{‖G⁻¹‖ >= 0.1 √n}` for an `n x n` Ginibre matrix.
pub fn check_ginibre_lower<R: TrialRunner>(
    runner: &R,
    n: usize,
    master_seed: u64,
    trials: u64,
) -> Result<GinibreLowerReport> {
    require_trials(trials)?;
    let samples = ginibre_inverse_norms(runner, n, &ShiftSpec::Zero, master_seed, trials)?;
    let threshold = GINIBRE_LOWER_FACTOR * libm::sqrt(n as f64);
    let above = samples.values.iter().filter(|&&v| v >= threshold).count() as u64;
    let point = tail_point(above, samples.count());
    Ok(GinibreLowerReport {
        n,
        trials: samples.count(),
        excluded: samples.excluded,
        threshold,
        fraction: point.estimate,
        interval: point.interval,
        passed: (n >= GINIBRE_LOWER_MIN_N).then_some(point.estimate >= GINIBRE_LOWER_FRACTION),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::Sequential;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn weak_norm_of_constant() {
        let s = SampleSet::new(alloc::vec![2.5; 200]);
        assert_eq!(weak_lp_norm(&s, 1.0).unwrap(), 2.5);
        assert_eq!(weak_lp_norm(&s, 2.0).unwrap(), 2.5);
        assert!(weak_lp_norm(&SampleSet::default(), 1.0).is_err());
    }

    /// `sup_t t · (2/π) arctan(1/t)` by grid search over a log-spaced range.
    fn cauchy_weak_l1_oracle() -> f64 {
        let mut best = 0.0f64;
        for k in 0..=4000 {
            let t = libm::pow(10.0, -2.0 + 8.0 * k as f64 / 4000.0);
            best = best.max(t * 2.0 / core::f64::consts::PI * libm::atan(1.0 / t));
        }
        best
    }

    #[test]
    fn weak_norm_of_cauchy_and_uniform() {
        let oracle = cauchy_weak_l1_oracle();
        assert!((oracle - 2.0 / core::f64::consts::PI).abs() < 1e-6);
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let cauchy: Cauchy<f64> = Cauchy::new(0.0, 1.0).unwrap();
        let xs = SampleSet::new((0..1_000_000).map(|_| cauchy.sample(&mut rng).abs()).collect());
        let est = weak_lp_norm(&xs, 1.0).unwrap();
        assert!((est / oracle - 1.0).abs() < 0.10, "{est}");

        let us = SampleSet::new((0..1_000_000).map(|_| rng.random::<f64>()).collect());
        let est = weak_lp_norm(&us, 1.0).unwrap();
        assert!((est / 0.25 - 1.0).abs() < 0.05, "{est}");
    }

    #[test]
    fn empirical_tail_examples() {
        let zeros = SampleSet::new(alloc::vec![0.0; 1000]);
        let p = empirical_tail(&zeros, 1.0);
        assert_eq!(p.estimate, 0.0);
        assert!((p.interval.upper - 0.0069).abs() < 5e-5);

        let ones = SampleSet::new(alloc::vec![2.0; 1000]);
        let p = empirical_tail(&ones, 1.0);
        assert_eq!(p.estimate, 1.0);
        assert!(p.interval.lower < 1.0);

        let half = SampleSet::new((0..1000).map(|i| if i % 2 == 0 { 2.0 } else { 0.0 }).collect());
        let p = empirical_tail(&half, 1.0);
        assert_eq!(p.estimate, 0.5);
        assert!(p.interval.lower < 0.5 && p.interval.upper > 0.5 && p.interval.width() < 0.11);
    }

    proptest! {
        #[test]
        fn weak_norm_is_scale_equivariant(
            values in proptest::collection::vec(0.0f64..1e6, 100..400),
            exp in -20i32..20,
        ) {
            // Powers of two keep the scaling exact in floating point.
            let c = libm::pow(2.0, exp as f64);
            let s = SampleSet::new(values);
            prop_assert_eq!(weak_lp_norm(&s.scaled(c), 1.0).unwrap(), c * weak_lp_norm(&s, 1.0).unwrap());
        }

        #[test]
        fn weak_norm_scales_for_general_factors(
            values in proptest::collection::vec(0.0f64..1e3, 100..300),
            c in 1e-3f64..1e3,
        ) {
            let s = SampleSet::new(values);
            let lhs = weak_lp_norm(&s.scaled(c), 1.5).unwrap();
            let rhs = c * weak_lp_norm(&s, 1.5).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-14 * rhs.abs());
        }

        #[test]
        fn tail_is_monotone_in_t(
            values in proptest::collection::vec(0.0f64..10.0, 1..200),
            mut ts in proptest::collection::vec(0.0f64..12.0, 2..10),
        ) {
            ts.sort_by(f64::total_cmp);
            let s = SampleSet::new(values);
            let est: Vec<f64> = ts.iter().map(|&t| empirical_tail(&s, t).estimate).collect();
            prop_assert!(est.windows(2).all(|w| w[0] >= w[1]));
            for &t in &ts {
                let p = empirical_tail(&s, t);
                prop_assert!(p.interval.lower <= p.estimate && p.estimate <= p.interval.upper);
            }
        }
    }

    #[test]
    fn report_orders_bounds_and_caps() {
        let s = SampleSet::new((1..=1000).map(|i| i as f64).collect());
        let r = TailReport::evaluate("test", &s, &[0.5, 100.0, 900.0], Exceedance::Strict, |t| t, |t| 200.0 / t, None);
        assert_eq!(r.exceed_counts, alloc::vec![1000, 900, 100]);
        assert_eq!(r.capped_bound[0], 1.0);
        for i in 0..3 {
            assert!(r.ci_lower[i] <= r.empirical[i] && r.empirical[i] <= r.ci_upper[i]);
        }
        // 0.9 observed against a bound of 2.0 -> capped at 1; 0.1 against 0.222.
        assert!(r.passed);
        let strict = TailReport::evaluate("tight", &s, &[100.0], Exceedance::Strict, |t| t, |_| 0.5, None);
        assert!(!strict.passed);
    }

    #[test]
    fn excessive_exclusions_fail_the_report() {
        let mut s = SampleSet::new(alloc::vec![0.0; 1000]);
        s.excluded = 5;
        let r = TailReport::evaluate("x", &s, &[1.0], Exceedance::Strict, |t| t, |_| 1.0, Some(MAX_EXCLUSION_RATE));
        assert!(!r.exclusions_ok && !r.passed);
    }

    #[test]
    fn theorem_bound_small_run() {
        let spec = EnsembleSpec::new(Family::BoundedUniform, 1.0, 8, ShiftSpec::Zero).unwrap();
        let r = check_theorem_bound(&Sequential, &spec, 1, 1000, &[1.0, 8.0, 10.0]).unwrap();
        assert!(r.passed);
        assert_eq!(r.capped_bound[0], 1.0);
        assert_eq!(r.capped_bound[1], 1.0);
        assert!((r.bound[2] - 0.8).abs() < 1e-15);
        assert!(check_theorem_bound(&Sequential, &spec, 1, 10, &[1.0]).is_err());
        let discrete = EnsembleSpec::new(Family::LazyRademacher, 1.0, 8, ShiftSpec::Zero).unwrap();
        assert!(matches!(
            check_theorem_bound(&Sequential, &discrete, 1, 1000, &[1.0]),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn hilbert_schmidt_tail_dominates_operator_tail() {
        let spec = EnsembleSpec::new(Family::Cauchy, 1.0, 6, ShiftSpec::Zero).unwrap();
        let s = inverse_norm_samples(&Sequential, &spec, 3, 2000).unwrap();
        for (op, hs) in s.operator.values.iter().zip(&s.hilbert_schmidt.values) {
            assert!(*op <= hs * (1.0 + 1e-8));
        }
        for t in [0.1, 1.0, 10.0, 100.0] {
            assert!(empirical_tail(&s.hilbert_schmidt, t).estimate >= empirical_tail(&s.operator, t).estimate);
        }
    }

    #[test]
    fn hagelstein_single_component_ratio_is_quarter() {
        let r = check_hagelstein(&Sequential, 1, 4, 20_000).unwrap();
        assert_eq!(r.ratio, 0.25);
        assert!(r.passed);
    }

    #[test]
    fn d_list_validation() {
        assert!(validate_d_list(&[1.0, 10.0]).is_err());
        assert!(validate_d_list(&[1.0, 5.0, 10.0]).is_err());
        assert!(validate_d_list(&[1.0, 10.0, 10.0, 100.0]).is_err());
        assert!(validate_d_list(&[1.0, 10.0, 100.0]).is_ok());
        assert!(matches!(counterexample_growth(&Sequential, 10, &[1.0, 2.0], 0, 10), Err(Error::Config(_))));
    }

    #[test]
    fn median_and_quantile_helpers() {
        assert_eq!(median_of_sorted(&[1.0, 2.0, 3.0]), 2.0);
        assert_eq!(median_of_sorted(&[1.0, 2.0, 3.0, 4.0]), 2.5);
        let v: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert_eq!(quantile_of_sorted(&v, 0.6), 6.0);
    }

    #[test]
    fn ginibre_lower_small_n_is_report_only() {
        let r = check_ginibre_lower(&Sequential, 5, 0, 1000).unwrap();
        assert_eq!(r.passed, None);
        assert!(r.fraction > 0.0);
    }

    #[test]
    fn t_grid_validation() {
        assert!(validate_t_grid(&[]).is_err());
        assert!(validate_t_grid(&[1.0, 1.0]).is_err());
        assert!(validate_t_grid(&[-1.0, 1.0]).is_err());
        assert!(validate_t_grid(&[1.0, 2.0]).is_ok());
    }
}
