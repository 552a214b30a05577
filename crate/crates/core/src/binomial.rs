//! Exact binomial confidence bounds.
//!
//! Each side of a [`BinomialInterval`] is a one-sided Clopper-Pearson bound at
//! the requested confidence, so `lower` can be used to refute an upper bound
//! on a probability and `upper` to certify one.

/// Confidence used by every tail check.
pub const CONFIDENCE: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BinomialInterval {
    pub lower: f64,
    pub upper: f64,
}

impl BinomialInterval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// One-sided Clopper-Pearson bounds for `successes` out of `trials`.
///
/// `lower` solves `P{Bin(trials, p) >= successes} = 1 - confidence`, `upper`
/// solves `P{Bin(trials, p) <= successes} = 1 - confidence`.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> BinomialInterval {
    assert!(successes <= trials, "more successes than trials");
    assert!(confidence > 0.0 && confidence < 1.0);
    if trials == 0 {
        return BinomialInterval {
            lower: 0.0,
            upper: 1.0,
        };
    }
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let lower = if successes == 0 {
        0.0
    } else {
        // P{X >= k} = I_p(k, n - k + 1), increasing in p.
        invert_increasing(alpha, |p| regularized_incomplete_beta(k, n - k + 1.0, p))
    };
    let upper = if successes == trials {
        1.0
    } else {
        // P{X <= k} = 1 - I_p(k + 1, n - k) = alpha.
        invert_increasing(1.0 - alpha, |p| regularized_incomplete_beta(k + 1.0, n - k, p))
    };
    BinomialInterval { lower, upper }
}

fn invert_increasing(target: f64, g: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi.max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`, `x` in `[0, 1]`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = libm::lgamma(a + b) - libm::lgamma(a) - libm::lgamma(b)
        + a * libm::log(x)
        + b * libm::log1p(-x);
    let front = libm::exp(ln_front);
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// Modified Lentz evaluation of the continued fraction for `I_x(a, b)`.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const MAX_ITER: usize = 100_000;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() <= 1e-15 {
            break;
        }
    }
    h
}
