//! Seeded samplers for the matrix laws used by the experiments.
//!
//! Every draw is a pure function of `(EnsembleSpec, SeedPath)`. The per-trial
//! generator is ChaCha8 keyed by the master seed, with the trial index selecting
//! one of its 2^64 independent streams, so trials can be evaluated in any order.

use alloc::format;
use alloc::vec::Vec;

use rand::distr::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Normal, StandardNormal};

use crate::matrix::{Matrix, SymMatrix};
use crate::{Error, Result};

/// Entry distribution of the random part `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Family {
    /// Uniform on `[-1/(2K), 1/(2K)]`; density exactly `K` on its support.
    BoundedUniform,
    /// Centred normal with standard deviation `1/(K√(2π))`; peak density exactly `K`.
    BoundedGaussian,
    /// Cauchy with scale `1/(πK)`; peak density exactly `K`, no finite mean.
    Cauchy,
    /// I.i.d. standard normal over the full, non-symmetric matrix.
    Ginibre,
    /// `±1` with probability 1/4 each, `0` with probability 1/2.
    LazyRademacher,
}

impl Family {
    pub fn is_continuous_symmetric(self) -> bool {
        matches!(self, Self::BoundedUniform | Self::BoundedGaussian | Self::Cauchy)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::BoundedUniform => "bounded_uniform",
            Self::BoundedGaussian => "bounded_gaussian",
            Self::Cauchy => "cauchy",
            Self::Ginibre => "ginibre",
            Self::LazyRademacher => "lazy_rademacher",
        }
    }
}

/// The deterministic part `D`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftSpec {
    Zero,
    ScalarIdentity(f64),
    /// `diag(0, d, d, ..., d)`.
    CounterexampleDiag(f64),
    ExplicitSymmetric(SymMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub family: Family,
    /// Density bound `K`; ignored for the Ginibre and lazy Rademacher families.
    pub density_bound: f64,
    pub n: usize,
    pub shift: ShiftSpec,
}

impl EnsembleSpec {
    pub fn new(family: Family, density_bound: f64, n: usize, shift: ShiftSpec) -> Result<Self> {
        let spec = Self {
            family,
            density_bound,
            n,
            shift,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.family.is_continuous_symmetric()
            && !(self.density_bound > 0.0 && self.density_bound.is_finite())
        {
            return Err(Error::Config(format!(
                "density bound K must be positive and finite, got {}",
                self.density_bound
            )));
        }
        match &self.shift {
            ShiftSpec::CounterexampleDiag(d) if !(*d >= 0.0 && d.is_finite()) => {
                Err(Error::Config(format!("counterexample shift needs d >= 0, got {d}")))
            }
            ShiftSpec::ScalarIdentity(c) if !c.is_finite() => {
                Err(Error::Config(format!("scalar shift must be finite, got {c}")))
            }
            ShiftSpec::ExplicitSymmetric(m) if m.n() != self.n => Err(Error::Config(format!(
                "explicit shift is {0}x{0}, ensemble has n = {1}",
                m.n(),
                self.n
            ))),
            _ => Ok(()),
        }
    }
}

/// Coordinates of one trial's random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedPath {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedPath {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.trial_index);
        rng
    }
}

/// Scalar entry law of a family, for a given density bound.
#[derive(Debug, Clone, Copy)]
enum EntryLaw {
    Uniform(Uniform<f64>),
    Gaussian(Normal<f64>),
    Cauchy(Cauchy<f64>),
    StandardNormal,
    LazyRademacher,
}

impl EntryLaw {
    fn for_family(family: Family, k: f64) -> Result<Self> {
        let bad = |e| Error::Config(format!("cannot build {} law: {e}", family.name()));
        Ok(match family {
            Family::BoundedUniform => {
                let half = 0.5 / k;
                Self::Uniform(Uniform::new_inclusive(-half, half).map_err(|e| bad(format!("{e}")))?)
            }
            Family::BoundedGaussian => {
                let sigma = 1.0 / (k * libm::sqrt(2.0 * core::f64::consts::PI));
                Self::Gaussian(Normal::new(0.0, sigma).map_err(|e| bad(format!("{e}")))?)
            }
            Family::Cauchy => {
                let gamma = 1.0 / (core::f64::consts::PI * k);
                Self::Cauchy(Cauchy::new(0.0, gamma).map_err(|e| bad(format!("{e}")))?)
            }
            Family::Ginibre => Self::StandardNormal,
            Family::LazyRademacher => Self::LazyRademacher,
        })
    }

    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::Uniform(d) => d.sample(rng),
            Self::Gaussian(d) => d.sample(rng),
            Self::Cauchy(d) => d.sample(rng),
            Self::StandardNormal => rng.sample(StandardNormal),
            Self::LazyRademacher => match rng.random_range(0u32..4) {
                0 => -1.0,
                1 => 1.0,
                _ => 0.0,
            },
        }
    }
}

/// The shift matrix `D` of dimension `n`.
pub fn shift_matrix(shift: &ShiftSpec, n: usize) -> Result<SymMatrix> {
    if n == 0 {
        return Err(Error::Config("n must be at least 1".into()));
    }
    match shift {
        ShiftSpec::Zero => SymMatrix::zeros(n),
        ShiftSpec::ScalarIdentity(c) => SymMatrix::diagonal(&alloc::vec![*c; n]),
        ShiftSpec::CounterexampleDiag(d) => {
            let mut diag = alloc::vec![*d; n];
            diag[0] = 0.0;
            SymMatrix::diagonal(&diag)
        }
        ShiftSpec::ExplicitSymmetric(m) if m.n() == n => Ok(m.clone()),
        ShiftSpec::ExplicitSymmetric(m) => Err(Error::Config(format!(
            "explicit shift is {0}x{0}, requested n = {1}",
            m.n(),
            n
        ))),
    }
}

/// Draws `A = D + R` with independent upper-triangle entries (diagonal included),
/// mirrored below the diagonal.
///
/// The Ginibre family is not symmetric; use [`sample_general`] for it.
pub fn sample_matrix(spec: &EnsembleSpec, seed: SeedPath) -> Result<SymMatrix> {
    spec.validate()?;
    if spec.family == Family::Ginibre {
        return Err(Error::UnsupportedFamily(
            "ginibre matrices are not symmetric; use sample_general",
        ));
    }
    let law = EntryLaw::for_family(spec.family, spec.density_bound)?;
    let mut rng = seed.rng();
    let random = SymMatrix::from_upper(spec.n, |_, _| law.sample(&mut rng))?;
    random.add(&shift_matrix(&spec.shift, spec.n)?)
}

/// Draws `D + R` as a general square matrix. Ginibre entries fill the whole
/// matrix row by row; the symmetric families defer to [`sample_matrix`].
pub fn sample_general(spec: &EnsembleSpec, seed: SeedPath) -> Result<Matrix> {
    if spec.family != Family::Ginibre {
        return sample_matrix(spec, seed).map(SymMatrix::into_matrix);
    }
    spec.validate()?;
    let mut rng = seed.rng();
    let shift = shift_matrix(&spec.shift, spec.n)?;
    Ok(Matrix::from_fn(spec.n, spec.n, |i, j| {
        rng.sample::<f64, _>(StandardNormal) + shift.get(i, j)
    }))
}

/// Draws `count` independent scalar entries of the family (without shift).
pub fn sample_entries(spec: &EnsembleSpec, count: usize, seed: SeedPath) -> Result<Vec<f64>> {
    spec.validate()?;
    let law = EntryLaw::for_family(spec.family, spec.density_bound)?;
    let mut rng = seed.rng();
    Ok((0..count).map(|_| law.sample(&mut rng)).collect())
}

/// Minimum number of samples for [`density_bound_check`].
pub const MIN_DENSITY_SAMPLES: usize = 100_000;

/// Allowed relative excess of the histogram peak over `K`.
pub const DENSITY_SLACK: f64 = 1.05;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityReport {
    pub family: Family,
    pub density_bound: f64,
    pub samples: usize,
    pub bin_width: f64,
    pub max_density: f64,
    /// Centre of the fullest bin.
    pub argmax: f64,
    pub limit: f64,
    pub passed: bool,
}

/// Histogram estimate of the peak entry density.
///
/// Bins have the Freedman-Diaconis width `2 · IQR · samples^(-1/3)` and are
/// anchored at the smallest sample. Only occupied bins are materialised, so
/// heavy-tailed families with huge ranges are fine.
pub fn density_bound_check(spec: &EnsembleSpec, samples: usize, seed: SeedPath) -> Result<DensityReport> {
    if !spec.family.is_continuous_symmetric() {
        return Err(Error::UnsupportedFamily(spec.family.name()));
    }
    if samples < MIN_DENSITY_SAMPLES {
        return Err(Error::Config(format!(
            "density check needs at least {MIN_DENSITY_SAMPLES} samples, got {samples}"
        )));
    }
    let mut values = sample_entries(spec, samples, seed)?;
    values.sort_by(f64::total_cmp);
    let quantile = |q: f64| values[((samples - 1) as f64 * q) as usize];
    let iqr = quantile(0.75) - quantile(0.25);
    let bin_width = 2.0 * iqr * libm::cbrt(samples as f64).recip();
    let origin = values[0];

    let (mut best_bin, mut best_count) = (0u64, 0usize);
    let mut current = (u64::MAX, 0usize);
    for &v in &values {
        let bin = libm::floor((v - origin) / bin_width) as u64;
        if bin == current.0 {
            current.1 += 1;
        } else {
            current = (bin, 1);
        }
        if current.1 > best_count {
            best_bin = current.0;
            best_count = current.1;
        }
    }
    let max_density = best_count as f64 / (samples as f64 * bin_width);
    let limit = spec.density_bound * DENSITY_SLACK;
    Ok(DensityReport {
        family: spec.family,
        density_bound: spec.density_bound,
        samples,
        bin_width,
        max_density,
        argmax: origin + (best_bin as f64 + 0.5) * bin_width,
        limit,
        passed: max_density <= limit,
    })
}
