//! Checks of the deterministic facts behind the entrywise tail bound.
//!
//! Freezing every entry of a symmetric `A` except the pair `(i, j), (j, i)` and
//! letting that pair vary as `x`:
//!
//! - `det A(x)` is a polynomial of degree at most 2 (degree 1 on the diagonal),
//! - the cofactor numerator of `(A⁻¹)ᵢⱼ` is affine in `x`,
//! - hence `|(A⁻¹)ᵢⱼ(x)| = |x + p| / |(x + p)² + q|` for constants `p, q`.
//!
//! The constants are recovered by fitting determinant evaluations at a fixed
//! probe set rather than by symbolic cofactor bookkeeping, which keeps the
//! sign conventions out of the picture.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::ensembles::{sample_matrix, EnsembleSpec, SeedPath};
use crate::matrix::{self, Matrix, SymMatrix};
use crate::runner::TrialRunner;
use crate::tail::{self, Exceedance, SampleSet, TailReport};
use crate::{Error, Result};

/// Probe offsets, in units of `1 + ‖A‖_HS`.
pub const PROBES: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Leading coefficients below this fraction of the median second-minor
/// magnitude mark a rational form as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

/// Least-squares polynomial of degree at most 2 in the free entry `x`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PolyFit {
    /// `c0 + c1 x + c2 x²`.
    pub coefficients: [f64; 3],
    /// Largest absolute misfit over the probe set.
    pub residual: f64,
    /// Largest absolute sample value.
    pub scale: f64,
    /// Unit of the probe set, `1 + ‖A‖_HS`.
    pub x_scale: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        let [c0, c1, c2] = self.coefficients;
        c0 + x * (c1 + x * c2)
    }

    /// Contribution of the quadratic term at one probe unit, relative to `scale`.
    pub fn relative_curvature(&self) -> f64 {
        let c2 = self.coefficients[2] * self.x_scale * self.x_scale;
        if self.scale == 0.0 {
            c2.abs()
        } else {
            c2.abs() / self.scale
        }
    }
}

/// Least-squares fit of degree `degree` (at most 2) to values at [`PROBES`].
///
/// The probes are symmetric and equally spaced, so the solution has fixed
/// closed-form weights; this avoids forming the normal equations.
fn fit_scaled(ys: &[f64; 5], degree: usize) -> [f64; 3] {
    let [ym2, ym1, y0, y1, y2] = *ys;
    let c1 = (2.0 * (y2 - ym2) + (y1 - ym1)) / 10.0;
    if degree < 2 {
        return [(ym2 + ym1 + y0 + y1 + y2) / 5.0, c1, 0.0];
    }
    let c0 = (17.0 * y0 + 12.0 * (y1 + ym1) - 3.0 * (y2 + ym2)) / 35.0;
    let c2 = (2.0 * (y2 + ym2) - (y1 + ym1) - 2.0 * y0) / 14.0;
    [c0, c1, c2]
}

fn fit_along(
    a: &SymMatrix,
    i: usize,
    j: usize,
    degree: usize,
    mut value: impl FnMut(&SymMatrix) -> Result<f64>,
) -> Result<PolyFit> {
    let x_scale = 1.0 + matrix::hs_norm(a.as_matrix());
    let mut ys = [0.0f64; 5];
    for (y, &u) in ys.iter_mut().zip(&PROBES) {
        *y = value(&a.with_pair(i, j, u * x_scale))?;
    }
    let c = fit_scaled(&ys, degree);
    let coefficients = [c[0], c[1] / x_scale, c[2] / (x_scale * x_scale)];
    let residual = PROBES
        .iter()
        .zip(&ys)
        .map(|(&u, &y)| (c[0] + u * (c[1] + u * c[2]) - y).abs())
        .fold(0.0, f64::max);
    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    Ok(PolyFit {
        coefficients,
        residual,
        scale,
        x_scale,
    })
}

fn check_index(a: &SymMatrix, i: usize, j: usize) -> Result<()> {
    for idx in [i, j] {
        if idx >= a.n() {
            return Err(Error::Index {
                index: idx,
                len: a.n(),
            });
        }
    }
    Ok(())
}

/// `det A(x)` as a fitted quadratic in the (symmetric) entry pair `(i, j)`.
///
/// Off the diagonal the fit is an exact quadratic whose leading coefficient
/// is, up to sign, the determinant of `A` with rows and columns `i, j` removed;
/// on the diagonal the quadratic coefficient vanishes.
pub fn fit_entry_dependence(a: &SymMatrix, i: usize, j: usize) -> Result<PolyFit> {
    check_index(a, i, j)?;
    fit_along(a, i, j, 2, |m| matrix::det(m.as_matrix()))
}

/// Constants of `|(A⁻¹)ᵢⱼ(x)| = |x + p| / |(x + p)² + q|` for an off-diagonal pair.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RationalEntryForm {
    pub i: usize,
    pub j: usize,
    /// Shift of the free entry. For a degenerate form, `det A(x) = slope · (x + p)`.
    pub p: f64,
    /// `NaN` for a degenerate form.
    pub q: f64,
    pub degenerate: bool,
    /// Quadratic coefficient of `det A(x)`.
    pub leading: f64,
    /// Affine numerator `n0 + n1 x` of `(A⁻¹)ᵢⱼ(x) · det A(x)`.
    pub numerator: [f64; 2],
    /// Linear coefficient of `det A(x)`; needed to evaluate degenerate forms.
    pub slope: f64,
}

impl RationalEntryForm {
    /// `|(A⁻¹)ᵢⱼ|` as a function of the free entry.
    pub fn eval_abs(&self, x: f64) -> f64 {
        if self.degenerate {
            let num = self.numerator[0] + self.numerator[1] * x;
            (num / (self.slope * (x + self.p))).abs()
        } else {
            let xp = x + self.p;
            (xp / (xp * xp + self.q)).abs()
        }
    }
}

/// Median `|det|` over all second minors (two rows and two columns removed).
fn second_minor_scale(m: &Matrix) -> Result<f64> {
    let n = m.rows();
    let mut dets = Vec::new();
    for r1 in 0..n {
        for r2 in (r1 + 1)..n {
            for c1 in 0..n {
                for c2 in (c1 + 1)..n {
                    dets.push(matrix::det(&matrix::minor(m, &[r1, r2], &[c1, c2])?)?.abs());
                }
            }
        }
    }
    if dets.is_empty() {
        return Ok(0.0);
    }
    dets.sort_by(f64::total_cmp);
    let median = dets[dets.len() / 2];
    Ok(if median > 0.0 { median } else { dets[dets.len() - 1] })
}

/// Recovers `p` and `q` for the off-diagonal pair `(i, j)` from determinant fits.
pub fn fit_rational_entry_form(a: &SymMatrix, i: usize, j: usize) -> Result<RationalEntryForm> {
    check_index(a, i, j)?;
    if i == j {
        return Err(Error::Domain(
            "rational entry form applies to off-diagonal pairs; use fit_entry_dependence".into(),
        ));
    }
    let denominator = fit_entry_dependence(a, i, j)?;
    let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let numerator = fit_along(a, i, j, 1, |m| {
        Ok(sign * matrix::det(&matrix::minor(m.as_matrix(), &[j], &[i])?)?)
    })?;
    let [gamma, beta, alpha] = denominator.coefficients;
    let scale = second_minor_scale(a.as_matrix())?;
    let degenerate = alpha.abs() <= DEGENERACY_THRESHOLD * scale;
    let (p, q) = if degenerate {
        (gamma / beta, f64::NAN)
    } else {
        let p = beta / (2.0 * alpha);
        (p, gamma / alpha - p * p)
    };
    Ok(RationalEntryForm {
        i,
        j,
        p,
        q,
        degenerate,
        leading: alpha,
        numerator: [numerator.coefficients[0], numerator.coefficients[1]],
        slope: beta,
    })
}

/// Relative mismatch between `trace(adj(A) E)` and a central difference of
/// `t -> det(A + tE)` at `t = 0`.
pub fn verify_jacobi(a: &SymMatrix, e: &SymMatrix) -> Result<f64> {
    if a.n() != e.n() {
        return Err(Error::Dimension(format!(
            "jacobi check needs equal sizes, got {} and {}",
            a.n(),
            e.n()
        )));
    }
    let adj = matrix::adjugate(a.as_matrix())?;
    let analytic = adj.matmul(e.as_matrix())?.trace();
    let h = 1e-5 * (1.0 + matrix::hs_norm(a.as_matrix()));
    let plus = matrix::det(a.add(&e.scaled(h))?.as_matrix())?;
    let minus = matrix::det(a.add(&e.scaled(-h))?.as_matrix())?;
    let numeric = (plus - minus) / (2.0 * h);
    Ok((analytic - numeric).abs() / (1.0 + analytic.abs()))
}

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AntiConcentration {
    pub s: f64,
    pub eps: f64,
    /// Negative component first.
    pub components: Vec<Interval>,
    pub component_lengths: Vec<f64>,
    pub total_measure: f64,
    /// Distance between the outermost endpoints.
    pub diameter: f64,
}

/// The set `{x : |x - s/x| < eps}` for `s, eps > 0`.
///
/// On `x > 0` the map is increasing, so the set is the interval between the
/// positive roots of `x² + eps·x - s` and `x² - eps·x - s`; the negative
/// component is its mirror image since the map is odd.
pub fn anticoncentration_measure(s: f64, eps: f64) -> Result<AntiConcentration> {
    if !(s > 0.0 && s.is_finite()) || !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!(
            "anti-concentration set needs s > 0 and eps > 0, got s = {s}, eps = {eps}"
        )));
    }
    let root = libm::sqrt(eps * eps + 4.0 * s);
    let hi = 0.5 * (eps + root);
    // (root - eps)/2 without cancellation.
    let lo = 2.0 * s / (eps + root);
    let positive = Interval { lo, hi };
    let negative = Interval { lo: -hi, hi: -lo };
    let components = alloc::vec![negative, positive];
    let component_lengths: Vec<f64> = components.iter().map(Interval::length).collect();
    Ok(AntiConcentration {
        s,
        eps,
        total_measure: component_lengths.iter().sum(),
        components,
        component_lengths,
        diameter: 2.0 * hi,
    })
}

/// Pointwise check `P{|(A⁻¹)ᵢⱼ| > t} <= 2K/t` for one entry of a continuous ensemble.
pub fn verify_entry_tail_pointwise<R: TrialRunner>(
    runner: &R,
    spec: &EnsembleSpec,
    i: usize,
    j: usize,
    master_seed: u64,
    trials: u64,
    t_grid: &[f64],
) -> Result<TailReport> {
    spec.validate()?;
    if !spec.family.is_continuous_symmetric() {
        return Err(Error::UnsupportedFamily(spec.family.name()));
    }
    if i >= spec.n || j >= spec.n {
        return Err(Error::Index {
            index: i.max(j),
            len: spec.n,
        });
    }
    if trials < tail::MIN_TAIL_TRIALS {
        return Err(Error::Config(format!(
            "entry tail check needs at least {} trials, got {trials}",
            tail::MIN_TAIL_TRIALS
        )));
    }
    tail::validate_t_grid(t_grid)?;
    let outcomes = runner.map_trials(trials, |t| {
        sample_matrix(spec, SeedPath::new(master_seed, t))
            .ok()
            .and_then(|a| matrix::inverse(&a).ok())
            .map(|inv| inv[(i, j)].abs())
    });
    let samples = SampleSet::from_outcomes(outcomes);
    let k = spec.density_bound;
    Ok(TailReport::evaluate(
        "2K/t",
        &samples,
        t_grid,
        Exceedance::Strict,
        |t| t,
        |t| tail::ENTRY_CONSTANT * k / t,
        Some(tail::MAX_EXCLUSION_RATE),
    ))
}

/// Worst observed residual of one identity across a suite run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityRow {
    pub identity: String,
    pub checks: u64,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentitySuiteReport {
    pub cases: u64,
    pub n_max: usize,
    pub degenerate_forms: u64,
    pub rows: Vec<IdentityRow>,
    pub passed: bool,
}

/// `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_error(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}

struct Tracker {
    name: &'static str,
    tolerance: f64,
    checks: u64,
    worst: f64,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            checks: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, residual: f64) {
        self.checks += 1;
        // NaN residuals count as failures.
        self.worst = if residual.is_nan() { f64::INFINITY } else { self.worst.max(residual) };
    }

    fn finish(self) -> IdentityRow {
        IdentityRow {
            identity: self.name.into(),
            checks: self.checks,
            max_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.worst < self.tolerance,
        }
    }
}

/// Symmetric matrix with upper-triangle entries uniform on `[-1, 1]` and
/// dimension uniform on `2..=n_max`, drawn from the stream of `seed`.
pub fn suite_matrix(n_max: usize, seed: SeedPath) -> SymMatrix {
    let mut rng = seed.rng();
    let n = rng.random_range(2..=n_max.max(2));
    SymMatrix::from_upper(n, |_, _| rng.random_range(-1.0..=1.0)).expect("n >= 2")
}

/// Runs every algebraic identity on `cases` seeded symmetric matrices.
///
/// Relative residuals use the floors implied by the absolute tolerances:
/// determinants are compared at `1e-9` relative with `1e-12` absolute, and
/// Cramer products at `1e-8` relative with `1e-12` absolute.
pub fn identity_suite(n_max: usize, cases: u64, master_seed: u64) -> Result<IdentitySuiteReport> {
    if n_max < 2 {
        return Err(Error::Config("identity suite needs n_max >= 2".into()));
    }
    let mut laplace = Tracker::new("laplace_expansion", 1e-9);
    let mut quadratic = Tracker::new("offdiagonal_quadratic", 1e-9);
    let mut linear = Tracker::new("diagonal_linear", 1e-10);
    let mut leading = Tracker::new("leading_second_minor", 1e-8);
    let mut cramer = Tracker::new("cramer_abs", 1e-8);
    let mut rational = Tracker::new("rational_form", 1e-8);
    let mut jacobi = Tracker::new("jacobi", 1e-5);
    let mut adjugate = Tracker::new("adjugate_product", 1e-8);
    let mut trace = Tracker::new("eigen_trace", 1e-9);
    let mut product = Tracker::new("eigen_det", 1e-7);
    let mut norm_dom = Tracker::new("norm_domination", 1e-8);
    let mut degenerate_forms = 0u64;

    for case in 0..cases {
        let seed = SeedPath::new(master_seed, case);
        let a = suite_matrix(n_max, seed);
        let m = a.as_matrix();
        let n = a.n();
        let mut rng = SeedPath::new(master_seed ^ 0x9e37_79b9_7f4a_7c15, case).rng();
        let d = matrix::det(m)?;

        let expansion: f64 = (0..n)
            .map(|c| {
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                Ok(sign * m[(0, c)] * matrix::first_minor_det(m, 0, c)?)
            })
            .sum::<Result<f64>>()?;
        laplace.record(relative_error(d, expansion, 1e-3));

        for i in 0..n {
            for j in i..n {
                let fit = fit_entry_dependence(&a, i, j)?;
                let held_out = (0..10)
                    .map(|_| {
                        let x = rng.random_range(-2.0..=2.0) * fit.x_scale;
                        let exact = matrix::det(a.with_pair(i, j, x).as_matrix())?;
                        Ok((fit.eval(x) - exact).abs())
                    })
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(fit.residual, f64::max);
                let scale = fit.scale.max(f64::MIN_POSITIVE);
                if i == j {
                    linear.record(fit.relative_curvature().max(held_out / scale));
                } else {
                    quadratic.record(held_out / scale);
                    let second = matrix::det(&matrix::minor(m, &[i, j], &[j, i])?)?;
                    leading.record(relative_error(fit.coefficients[2].abs(), second.abs(), 1e-4));
                    let form = fit_rational_entry_form(&a, i, j)?;
                    if form.degenerate {
                        degenerate_forms += 1;
                    }
                    for _ in 0..2 {
                        let x = rng.random_range(-2.0..=2.0) * fit.x_scale;
                        let shifted = a.with_pair(i, j, x);
                        if let Some(inv) = matrix::general_inverse(shifted.as_matrix()) {
                            rational.record(relative_error(form.eval_abs(x), inv[(i, j)].abs(), 1e-12));
                        }
                    }
                }
            }
        }

        if let Some(inv) = matrix::general_inverse(m) {
            for i in 0..n {
                for j in 0..n {
                    let lhs = inv[(i, j)].abs() * d.abs();
                    let rhs = matrix::first_minor_det(m, j, i)?.abs();
                    cramer.record(relative_error(lhs, rhs, 1e-4));
                }
            }
            if let Ok(op) = matrix::inverse_op_norm(&a) {
                let hs = matrix::hs_norm(&inv);
                norm_dom.record(((op - hs) / hs).max(0.0));
            }
        }

        let e = SymMatrix::from_upper(n, |_, _| rng.random_range(-1.0..=1.0))?;
        jacobi.record(verify_jacobi(&a, &e)?);

        let adj = matrix::adjugate(m)?;
        let prod = m.matmul(&adj)?.sub(&Matrix::identity(n).scaled(d))?;
        adjugate.record(prod.max_abs() / ((1.0 + d.abs()) * matrix::hs_norm(m)));

        let spectrum = matrix::sym_eigenvalues(&a);
        let ev = &spectrum.eigenvalues;
        let sum: f64 = ev.iter().sum();
        trace.record((sum - m.trace()).abs() / m.trace().abs().max(spectrum.max_abs()));
        let prod_ev: f64 = ev.iter().product();
        // Backward-stable eigenvalues carry absolute error ~ ε‖A‖, so the product
        // is compared on the scale Π|λ| · max|λ| / min|λ|.
        let scale = prod_ev.abs() * spectrum.max_abs() / spectrum.min_abs().max(f64::MIN_POSITIVE);
        product.record((prod_ev - d).abs() / scale.max(prod_ev.abs()).max(d.abs()).max(1e-300));
    }

    let rows: Vec<IdentityRow> = [
        laplace, quadratic, linear, leading, cramer, rational, jacobi, adjugate, trace, product, norm_dom,
    ]
    .into_iter()
    .map(Tracker::finish)
    .collect();
    let passed = rows.iter().all(|r| r.passed);
    Ok(IdentitySuiteReport {
        cases,
        n_max,
        degenerate_forms,
        rows,
        passed,
    })
}
