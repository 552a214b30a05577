//! Numerical kernels for studying the invertibility of `D + R`, where `D` is
//! a deterministic symmetric shift and `R` a symmetric random matrix whose
//! independent entries have bounded densities.
//!
//! The crate is `no_std` (with `alloc`) and has no global state: every random
//! draw is a pure function of an [`ensembles::SeedPath`], and Monte Carlo loops
//! are expressed against the [`runner::TrialRunner`] trait so a host crate can
//! supply a parallel executor without changing any result.
//!
//! Modules:
//!
//! - [`matrix`]: dense determinants, minors, adjugates, inverses, norms and a
//!   symmetric eigensolver.
//! - [`ensembles`]: seeded samplers for every matrix law used in the
//!   experiments.
//! - [`identities`]: checks of the determinant identities that drive the
//!   entrywise tail bound, and the anti-concentration geometry of `x - s/x`.
//! - [`tail`]: weak-L<sub>p</sub> estimation and confidence-bounded tail
//!   checks.
//! - [`binomial`]: exact (Clopper-Pearson) binomial confidence bounds.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod binomial;
pub mod ensembles;
mod error;
pub mod identities;
pub mod matrix;
pub mod runner;
pub mod tail;

#[cfg(any(test, feature = "test-oracles"))]
pub mod oracle;

pub use error::{Error, Result};
