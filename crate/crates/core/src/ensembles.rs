//! Eigenvalue densities and exact samplers for the Gaussian ensembles, and
//! the seeded Monte Carlo engine.
//!
//! Normalisation contract: a GUE matrix has real diagonal entries of
//! variance `σ²` and complex off-diagonal entries with `E|H_jk|² = σ²`; a
//! chiral GUE matrix `M` is `(N+ν)×N` with complex entries of
//! `E|M_jk|² = 2σ²`. These reproduce the one-particle marginals of the
//! eigenvalue densities [`gue_pdf`] and [`chgue_pdf`].

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Configuration;
use crate::detkit::vandermonde_product;
use crate::error::{domain, Result};
use crate::rng::stream;
use crate::specfun::{check_nu, log_gamma};
use crate::stats::mean_stderr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleKind {
    Gue,
    ChGue,
    ClassC,
    ClassD,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::Gue => "gue",
            EnsembleKind::ChGue => "chgue",
            EnsembleKind::ClassC => "classc",
            EnsembleKind::ClassD => "classd",
        }
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gue" => Ok(EnsembleKind::Gue),
            "chgue" => Ok(EnsembleKind::ChGue),
            "classc" | "c" => Ok(EnsembleKind::ClassC),
            "classd" | "d" => Ok(EnsembleKind::ClassD),
            other => Err(domain(format!("unknown ensemble {other:?}"))),
        }
    }
}

/// An ensemble together with its size, index and variance.
///
/// For classes C and D, `n` is the number of positive eigenvalue pairs of
/// the underlying `2N×2N` matrix; what is sampled is the law of their
/// squares, the chiral density with `ν = 1/2` (C) or `ν = -1/2` (D).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    n: usize,
    nu: f64,
    sigma2: f64,
}

impl EnsembleSpec {
    /// `nu` is only read for [`EnsembleKind::ChGue`].
    pub fn new(kind: EnsembleKind, n: usize, nu: f64, sigma2: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("ensemble size must be positive"));
        }
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(domain(format!("variance must be positive, got {sigma2}")));
        }
        let nu = match kind {
            EnsembleKind::Gue => 0.0,
            EnsembleKind::ChGue => {
                check_nu(nu)?;
                nu
            }
            EnsembleKind::ClassC => 0.5,
            EnsembleKind::ClassD => -0.5,
        };
        Ok(Self {
            kind,
            n,
            nu,
            sigma2,
        })
    }

    pub fn gue(n: usize, sigma2: f64) -> Result<Self> {
        Self::new(EnsembleKind::Gue, n, 0.0, sigma2)
    }

    pub fn chgue(n: usize, nu: f64, sigma2: f64) -> Result<Self> {
        Self::new(EnsembleKind::ChGue, n, nu, sigma2)
    }

    pub fn class_c(n: usize, sigma2: f64) -> Result<Self> {
        Self::new(EnsembleKind::ClassC, n, 0.0, sigma2)
    }

    pub fn class_d(n: usize, sigma2: f64) -> Result<Self> {
        Self::new(EnsembleKind::ClassD, n, 0.0, sigma2)
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Index of the chiral law sampled, or `None` for the GUE.
    pub fn law_nu(&self) -> Option<f64> {
        match self.kind {
            EnsembleKind::Gue => None,
            _ => Some(self.nu),
        }
    }

    /// Draw number `index` of the run seeded by `seed`.
    pub fn sample(&self, seed: u64, index: u64) -> Configuration {
        let mut rng = stream(seed, index);
        self.sample_with(&mut rng)
    }

    pub fn sample_with(&self, rng: &mut ChaCha8Rng) -> Configuration {
        match self.law_nu() {
            None => sample_gue_with(self.n, self.sigma2, rng),
            Some(nu) => sample_chgue_with(self.n, nu, self.sigma2, rng),
        }
    }

    /// Ordered-sector eigenvalue density of the sampled law.
    pub fn pdf(&self, x: &Configuration) -> Result<f64> {
        match self.law_nu() {
            None => gue_pdf(self.n, self.sigma2, x),
            Some(nu) => chgue_pdf(self.n, nu, self.sigma2, x),
        }
    }
}

/// GUE eigenvalue density `σ^{-N²}/C_N · e^{-|x|²/2σ²} h_N(x)²` on the
/// ordered sector, `C_N = (2π)^{N/2} Π_{j=1}^N Γ(j)`.
pub fn gue_pdf(n: usize, sigma2: f64, x: &Configuration) -> Result<f64> {
    if x.len() != n {
        return Err(crate::Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    if !(sigma2 > 0.0) {
        return Err(domain("variance must be positive"));
    }
    let nf = n as f64;
    let mut log_c = 0.5 * nf * (2.0 * std::f64::consts::PI).ln();
    for j in 1..=n {
        log_c += log_gamma(j as f64)?;
    }
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let h = vandermonde_product(x.points(), n)?;
    let log_sigma = 0.5 * sigma2.ln();
    Ok((-nf * nf * log_sigma - log_c - sq / (2.0 * sigma2)).exp() * h * h)
}

/// Chiral GUE density of squared singular values
/// `σ^{-2N(N+ν)}/C_N^{(ν)} · Π x_j^ν e^{-x_j/2σ²} · h_N(x)²`,
/// `C_N^{(ν)} = 2^{N(N+ν)} Π Γ(j)Γ(j+ν)`.
pub fn chgue_pdf(n: usize, nu: f64, sigma2: f64, x: &Configuration) -> Result<f64> {
    check_nu(nu)?;
    if x.len() != n {
        return Err(crate::Error::Dimension {
            expected: n,
            got: x.len(),
        });
    }
    if !(sigma2 > 0.0) {
        return Err(domain("variance must be positive"));
    }
    if !x.is_nonnegative() {
        return Err(domain("chiral GUE points must be nonnegative"));
    }
    let nf = n as f64;
    let mut log_c = nf * (nf + nu) * std::f64::consts::LN_2;
    for j in 1..=n {
        log_c += log_gamma(j as f64)? + log_gamma(j as f64 + nu)?;
    }
    let mut log_w = -nf * (nf + nu) * sigma2.ln() - log_c;
    let mut power = 1.0;
    for &v in x.iter() {
        log_w -= v / (2.0 * sigma2);
        if nu != 0.0 {
            power *= v.powf(nu);
        }
    }
    let h = vandermonde_product(x.points(), n)?;
    Ok(log_w.exp() * power * h * h)
}

fn complex_normal(rng: &mut ChaCha8Rng, var: f64) -> Complex64 {
    let s = (0.5 * var).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

fn sorted(mut v: Vec<f64>) -> Configuration {
    v.sort_by(f64::total_cmp);
    Configuration::new(v).expect("eigenvalues are finite")
}

/// Ordered eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(h: DMatrix<Complex64>) -> Configuration {
    sorted(SymmetricEigen::new(h).eigenvalues.iter().copied().collect())
}

/// A GUE matrix with the crate's normalisation contract.
pub(crate) fn gue_matrix(n: usize, sigma2: f64, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let sd = sigma2.sqrt();
    for j in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        h[(j, j)] = Complex64::new(sd * d, 0.0);
        for k in j + 1..n {
            let z = complex_normal(rng, sigma2);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
        }
    }
    h
}

pub fn sample_gue_with(n: usize, sigma2: f64, rng: &mut ChaCha8Rng) -> Configuration {
    if n == 1 {
        let d: f64 = rng.sample(StandardNormal);
        return Configuration::new(vec![sigma2.sqrt() * d]).expect("finite");
    }
    hermitian_eigenvalues(gue_matrix(n, sigma2, rng))
}

/// Ordered GUE eigenvalues: draw 0 of the run seeded by `seed`.
pub fn sample_gue(n: usize, sigma2: f64, seed: u64) -> Result<Configuration> {
    EnsembleSpec::gue(n, sigma2)?;
    Ok(sample_gue_with(n, sigma2, &mut stream(seed, 0)))
}

/// A complex `(N+ν)×N` Gaussian matrix with `E|M_jk|² = 2σ²`.
pub(crate) fn chiral_matrix(
    n: usize,
    nu: usize,
    sigma2: f64,
    rng: &mut ChaCha8Rng,
) -> DMatrix<Complex64> {
    DMatrix::from_fn(n + nu, n, |_, _| complex_normal(rng, 2.0 * sigma2))
}

/// Eigenvalues of `M†M` for integer `ν`.
pub fn sample_chgue_wishart(
    n: usize,
    nu: usize,
    sigma2: f64,
    rng: &mut ChaCha8Rng,
) -> Configuration {
    let m = chiral_matrix(n, nu, sigma2, rng);
    let w = m.adjoint() * m;
    sorted(
        hermitian_eigenvalues(w)
            .into_points()
            .into_iter()
            .map(|v| v.max(0.0))
            .collect(),
    )
}

fn chi(rng: &mut ChaCha8Rng, dof: f64) -> f64 {
    ChiSquared::new(dof)
        .expect("positive degrees of freedom")
        .sample(rng)
        .sqrt()
}

/// The β = 2 bidiagonal Laguerre model: `B` lower bidiagonal with diagonal
/// `σ χ_{2(N+ν-k+1)}` and subdiagonal `σ χ_{2(N-k)}`; the squared singular
/// values of `B` follow the chiral density exactly for every `ν > -1`.
pub fn sample_chgue_bidiagonal(
    n: usize,
    nu: f64,
    sigma2: f64,
    rng: &mut ChaCha8Rng,
) -> Configuration {
    let sd = sigma2.sqrt();
    let diag: Vec<f64> = (1..=n)
        .map(|k| sd * chi(rng, 2.0 * (n as f64 + nu - k as f64 + 1.0)))
        .collect();
    let sub: Vec<f64> = (1..n)
        .map(|k| sd * chi(rng, 2.0 * (n - k) as f64))
        .collect();
    if n == 1 {
        return Configuration::new(vec![diag[0] * diag[0]]).expect("finite");
    }
    // T = B Bᵀ is symmetric tridiagonal.
    let mut t = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        t[(k, k)] = diag[k] * diag[k] + if k > 0 { sub[k - 1] * sub[k - 1] } else { 0.0 };
        if k + 1 < n {
            t[(k, k + 1)] = diag[k] * sub[k];
            t[(k + 1, k)] = diag[k] * sub[k];
        }
    }
    sorted(
        SymmetricEigen::new(t)
            .eigenvalues
            .iter()
            .map(|v| v.max(0.0))
            .collect(),
    )
}

/// Integer `ν` uses the Wishart construction, any other `ν` the bidiagonal
/// model.
pub fn sample_chgue_with(n: usize, nu: f64, sigma2: f64, rng: &mut ChaCha8Rng) -> Configuration {
    if nu >= 0.0 && nu.fract() == 0.0 && nu <= 64.0 {
        sample_chgue_wishart(n, nu as usize, sigma2, rng)
    } else {
        sample_chgue_bidiagonal(n, nu, sigma2, rng)
    }
}

/// Ordered chiral GUE squared singular values: draw 0 of the run seeded by
/// `seed`.
pub fn sample_chgue(n: usize, nu: f64, sigma2: f64, seed: u64) -> Result<Configuration> {
    EnsembleSpec::chgue(n, nu, sigma2)?;
    Ok(sample_chgue_with(n, nu, sigma2, &mut stream(seed, 0)))
}

/// Result of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McReport {
    pub estimate: Complex64,
    /// Standard error of the mean; for complex estimates the root sum of
    /// the squared errors of the real and imaginary parts.
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McReport {
    /// `|estimate - reference| / stderr`.
    pub fn z(&self, reference: Complex64) -> f64 {
        crate::stats::z_score((self.estimate - reference).norm(), 0.0, self.stderr).abs()
    }
}

/// Evaluate `f` on draws `0..samples` of `spec` in parallel; the output is
/// in draw order.
pub fn mc_map<T, F>(spec: &EnsembleSpec, samples: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Configuration) -> Result<T> + Sync,
{
    (0..samples as u64)
        .into_par_iter()
        .map(|i| f(&spec.sample(seed, i)))
        .collect()
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(domain("Monte Carlo needs at least two samples"));
    }
    Ok(())
}

/// Mean and standard error of each component of a vector-valued
/// observable, all components evaluated on the same draws.
pub fn mc_expectation_vec<F>(
    spec: &EnsembleSpec,
    samples: usize,
    seed: u64,
    f: F,
) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&Configuration) -> Result<Vec<f64>> + Sync,
{
    check_samples(samples)?;
    let rows = mc_map(spec, samples, seed, f)?;
    let dim = rows.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(dim);
    let mut column = vec![0.0; samples];
    for c in 0..dim {
        for (slot, row) in column.iter_mut().zip(&rows) {
            *slot = row[c];
        }
        out.push(mean_stderr(&column));
    }
    Ok(out)
}

/// Monte Carlo estimate of `E[f(Ξ)]` under `spec`.
pub fn mc_expectation<F>(spec: &EnsembleSpec, f: F, samples: usize, seed: u64) -> Result<McReport>
where
    F: Fn(&Configuration) -> Complex64 + Sync,
{
    let parts = mc_expectation_vec(spec, samples, seed, |x| {
        let v = f(x);
        Ok(vec![v.re, v.im])
    })?;
    Ok(McReport {
        estimate: Complex64::new(parts[0].0, parts[1].0),
        stderr: parts[0].1.hypot(parts[1].1),
        samples,
        seed,
    })
}
