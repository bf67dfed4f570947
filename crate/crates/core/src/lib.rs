//! Determinantal machinery of noncolliding Brownian motion and noncolliding
//! squared Bessel processes, and the determinantal formulas it yields for
//! ensemble averages of products of characteristic polynomials of Gaussian
//! random matrices (GUE, chiral GUE, classes C and D).
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: Hermite/Laguerre polynomials, Bessel functions, log-gamma.
//! * [`detkit`]: dense complex determinants, Vandermonde, Cauchy and
//!   Ishikawa determinant identities.
//! * [`densities`]: Brownian and squared-Bessel transition densities and
//!   Karlin–McGregor determinants.
//! * [`ensembles`]: eigenvalue densities, exact samplers and the seeded
//!   Monte Carlo engine.
//! * [`charpoly`]: closed forms and Monte Carlo estimates of
//!   characteristic-polynomial averages.
//! * [`biorth`]: the biorthogonal φ-functions, correlation kernels,
//!   correlation functions and multitime densities.
//! * [`processes`]: Euler–Maruyama and matrix-valued simulation of the
//!   noncolliding diffusions.
//! * [`equivalence`]: Monte Carlo verification of the time-shift equivalence
//!   between random and deterministic initial configurations.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod biorth;
pub mod charpoly;
pub mod config;
pub mod densities;
pub mod detkit;
pub mod ensembles;
pub mod equivalence;
mod error;
pub mod identities;
pub mod processes;
pub mod quad;
pub mod rng;
mod series;
pub mod specfun;
pub mod stats;

pub use num_complex::Complex64;

pub use crate::biorth::Family;
pub use crate::config::{Configuration, InitialConfig};
pub use crate::ensembles::{EnsembleKind, EnsembleSpec, McReport};
pub use crate::error::{Error, Result};

/// Relative discrepancy `|a - b| / max(|a|, |b|, 1e-300)`.
pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Real-valued variant of [`rel_err`].
pub fn rel_err_f64(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
