//! Slow, independent reference computations for test suites.
//!
//! Nothing here shares code with the production kernels: determinants are
//! expanded recursively along the first row, and binomial probabilities are
//! summed term by term.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::matrix::{Matrix, SymMatrix};

/// Laplace expansion along the first row. Exponential cost; meant for `n <= 8`.
pub fn cofactor_det(m: &Matrix) -> f64 {
    assert!(m.is_square());
    let n = m.rows();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    expand(m, &rows, &cols)
}

fn expand(m: &Matrix, rows: &[usize], cols: &[usize]) -> f64 {
    match rows.len() {
        0 => 1.0,
        1 => m[(rows[0], cols[0])],
        _ => {
            let mut total = 0.0;
            let rest = &rows[1..];
            for (k, &c) in cols.iter().enumerate() {
                let entry = m[(rows[0], c)];
                if entry == 0.0 {
                    continue;
                }
                let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * entry * expand(m, rest, &sub);
            }
            total
        }
    }
}

/// `rows x cols` matrix with entries uniform on `[-1, 1]`.
pub fn seeded_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

/// Symmetric matrix with upper-triangle entries uniform on `[-1, 1]`.
pub fn seeded_symmetric(n: usize, seed: u64) -> SymMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5bd1_e995);
    SymMatrix::from_upper(n, |_, _| rng.random_range(-1.0..=1.0)).unwrap()
}

/// `P{Bin(n, p) >= k}` by direct summation of the probability mass function in log space.
pub fn binomial_upper_tail(n: u64, k: u64, p: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let mut total = 0.0;
    for j in k..=n {
        let log_choose = libm::lgamma(n as f64 + 1.0)
            - libm::lgamma(j as f64 + 1.0)
            - libm::lgamma((n - j) as f64 + 1.0);
        total += libm::exp(log_choose + j as f64 * libm::log(p) + (n - j) as f64 * libm::log1p(-p));
    }
    total.min(1.0)
}

/// Solves `g(p) = target` for a monotone `g` on `[0, 1]` by plain bisection.
pub fn bisect_probability(target: f64, increasing: bool, g: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let above = g(mid) > target;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
