//! Averages of products of characteristic polynomials: the two families of
//! determinantal closed forms and their Monte Carlo counterparts.
//!
//! For `α ∈ C^{2n}` the quantities are
//! `M_GUE(2n, α; N, σ²) = E[Π_m det(α_m - H)]` over the GUE and
//! `M^{(ν)}(2n, α; N, σ²) = E[Π_m Π_j (α_m - X_j)]` over the chiral law.

use num_complex::Complex64;

use crate::config::Configuration;
use crate::detkit::{det_in_place, narrow, widen, WideComplex};
use crate::ensembles::{mc_expectation, EnsembleKind, EnsembleSpec, McReport};
use crate::error::{domain, Error, Result};
use crate::specfun::{
    check_nu, hermite_coefficients, laguerre_coefficients, log_factorial, log_gamma,
    monic_divided_differences,
};

/// Relative separation below which two evaluation points count as equal.
pub const COINCIDENCE_TOL: f64 = 1e-6;

/// Agreement required between the two class C/D expressions.
pub const CLASS_FORM_TOL: f64 = 1e-9;

/// Evaluation points `α_1, …, α_{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    values: Vec<Complex64>,
}

impl AlphaGrid {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.len() < 2 || values.len() % 2 != 0 {
            return Err(domain(format!(
                "closed forms need an even number ≥ 2 of points, got {}",
                values.len()
            )));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(domain("evaluation points must be finite"));
        }
        Ok(Self { values })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Half the number of points.
    pub fn n(&self) -> usize {
        self.values.len() / 2
    }

    /// `α^{⟨2⟩} = (α_1², …, α_{2n}²)`.
    pub fn squares(&self) -> AlphaGrid {
        AlphaGrid {
            values: self.values.iter().map(|a| a * a).collect(),
        }
    }
}

fn check_distinct(points: &[Complex64]) -> Result<()> {
    let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut min_sep = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[..i] {
            min_sep = min_sep.min((a - b).norm());
        }
    }
    if min_sep < COINCIDENCE_TOL * scale {
        return Err(Error::Coincident {
            separation: min_sep,
        });
    }
    Ok(())
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(domain(format!("variance must be positive, got {sigma2}")));
    }
    Ok(())
}

fn check_n(n_mat: usize) -> Result<()> {
    if n_mat == 0 {
        return Err(domain("matrix size must be positive"));
    }
    Ok(())
}

/// `det[P_{N+j-1}(α_k)]_{j,k ≤ 2n} / h_{2n}(α)`, evaluated as the
/// determinant of divided differences `det[P_{N+j-1}[α_1, …, α_k]]` for the
/// monic family with recurrence coefficients `(b, c)`. The elimination
/// cancels heavily for high degrees, so it runs in double-double.
fn monic_ratio(
    alpha: &[Complex64],
    n_mat: usize,
    b: impl Fn(usize) -> f64,
    c: impl Fn(usize) -> f64,
) -> Complex64 {
    let m = alpha.len();
    let wide: Vec<WideComplex> = alpha.iter().map(|&a| widen(a)).collect();
    let dd = monic_divided_differences(n_mat + m - 1, &wide, b, c);
    let mut entries = Vec::with_capacity(m * m);
    for j in 0..m {
        entries.extend_from_slice(&dd[n_mat + j]);
    }
    narrow(det_in_place(&mut entries, m))
}

/// `det[(1/(α_j - α_{n+k})) |P(α_j) P(α_{n+k}); Q(α_j) Q(α_{n+k})|] / (h_n h_n)`
/// with `P = P_{N+n}`, `Q = P_{N+n-1}`.
///
/// By Christoffel-Darboux each entry is `Σ_{l<N+n} w_l P_l(α_j) P_l(α_{n+k})`
/// with `w_l = c_{l+1} ⋯ c_{N+n-1}`, so the ratio is
/// `det[Σ_l w_l P_l[α_1..α_j] P_l[α_{n+1}..α_{n+k}]]`.
fn pair_ratio(
    alpha: &[Complex64],
    n_mat: usize,
    b: impl Fn(usize) -> f64 + Copy,
    c: impl Fn(usize) -> f64 + Copy,
) -> Complex64 {
    let n = alpha.len() / 2;
    let top = n_mat + n;
    let (lo, hi) = alpha.split_at(n);
    let dlo = monic_divided_differences(top - 1, lo, b, c);
    let dhi = monic_divided_differences(top - 1, hi, b, c);
    let mut w = vec![1.0; top];
    for l in (0..top - 1).rev() {
        w[l] = w[l + 1] * c(l + 1);
    }
    let mut entries = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            entries.push(
                (0..top)
                    .map(|l| w[l] * dlo[l][j] * dhi[l][k])
                    .sum::<Complex64>(),
            );
        }
    }
    det_in_place(&mut entries, n)
}

/// Pair-determinant form for the GUE average:
/// `γ_{N,2n} σ^{n(2N+n)} / (h_n h_n) · det[(1/(α_j-α_{n+k})) |H_{N+n} …; H_{N+n-1} …|]`
/// with Hermite polynomials at `α/√(2σ²)` and
/// `γ_{N,2n} = 2^{-n(2N+2n-1)/2} Π_{ℓ=2}^n (N+n-ℓ)!/(N+n-1)!`.
///
/// The entries are assembled from the monic `Ĥ_ℓ = (σ²/2)^{ℓ/2} H_ℓ` and the
/// resulting power of `σ²/2` is folded into the prefactor.
pub fn m_gue_pair_form(alpha: &AlphaGrid, n_mat: usize, sigma2: f64) -> Result<Complex64> {
    check_n(n_mat)?;
    check_sigma2(sigma2)?;
    check_distinct(alpha.values())?;
    let (n, nm) = (alpha.n() as f64, n_mat as f64);
    let mut log_gamma_pref = -n * (2.0 * nm + 2.0 * n - 1.0) / 2.0 * std::f64::consts::LN_2;
    for l in 2..=alpha.n() {
        log_gamma_pref +=
            log_factorial(n_mat + alpha.n() - l) - log_factorial(n_mat + alpha.n() - 1);
    }
    let log_pref = log_gamma_pref + n * (2.0 * nm + n) * 0.5 * sigma2.ln()
        - n * (2.0 * nm + 2.0 * n - 1.0) / 2.0 * (sigma2 / 2.0).ln();
    let (b, c) = hermite_coefficients(sigma2);
    let core = pair_ratio(alpha.values(), n_mat, &b, &c);
    Ok(log_pref.exp() * core)
}

/// Monic form for the GUE average: `det[Ĥ_{N+j-1}(α_k; σ²)]_{2n×2n} / h_{2n}(α)`.
pub fn m_gue_monic_form(alpha: &AlphaGrid, n_mat: usize, sigma2: f64) -> Result<Complex64> {
    check_n(n_mat)?;
    check_sigma2(sigma2)?;
    check_distinct(alpha.values())?;
    let (b, c) = hermite_coefficients(sigma2);
    Ok(monic_ratio(alpha.values(), n_mat, b, c))
}

/// `ln |γ^{(ν)}_{N,2n}|`; the sign is `(-1)^n`.
///
/// `γ^{(ν)}_{N,2n} = (-1)^n ((N+n)!/Γ(N+n+ν))^{n-1} Π_{ℓ=1}^{n-1} Γ(N+ν+ℓ) Π_{m=1}^{n+1} (N+m-1)!`.
fn log_gamma_nu(n_mat: usize, n: usize, nu: f64) -> Result<f64> {
    let (nm, nf) = (n_mat as f64, n as f64);
    let mut acc = (nf - 1.0) * (log_factorial(n_mat + n) - log_gamma(nm + nf + nu)?);
    for l in 1..n {
        acc += log_gamma(nm + nu + l as f64)?;
    }
    for m in 1..=n + 1 {
        acc += log_factorial(n_mat + m - 1);
    }
    Ok(acc)
}

/// Pair-determinant form for the chiral average:
/// `γ^{(ν)}_{N,2n} (2σ²)^{n(2N+n)} / (h_n h_n) · det[(1/(α_j-α_{n+k})) |L^ν_{N+n} …; L^ν_{N+n-1} …|]`
/// with Laguerre polynomials at `α/2σ²`.
///
/// Entries use the monic `L̂_ℓ = (-2σ²)^ℓ ℓ! L^ν_ℓ`; the conversion factor
/// `((-2σ²)^{2N+2n-1} (N+n)! (N+n-1)!)^{-n}` enters the prefactor.
pub fn m_nu_pair_form(alpha: &AlphaGrid, n_mat: usize, nu: f64, sigma2: f64) -> Result<Complex64> {
    check_n(n_mat)?;
    check_nu(nu)?;
    check_sigma2(sigma2)?;
    check_distinct(alpha.values())?;
    let n = alpha.n();
    let (nf, nm) = (n as f64, n_mat as f64);
    let ln2s = (2.0 * sigma2).ln();
    let log_pref = log_gamma_nu(n_mat, n, nu)? + nf * (2.0 * nm + nf) * ln2s
        - nf * ((2.0 * nm + 2.0 * nf - 1.0) * ln2s
            + log_factorial(n_mat + n)
            + log_factorial(n_mat + n - 1));
    // (-1)^n from γ and (-1)^{n(2N+2n-1)} = (-1)^n from the conversion cancel.
    let (b, c) = laguerre_coefficients(nu, sigma2);
    let core = pair_ratio(alpha.values(), n_mat, &b, &c);
    Ok(log_pref.exp() * core)
}

/// Monic form for the chiral average:
/// `det[L̂^ν_{N+j-1}(α_k; σ²)]_{2n×2n} / h_{2n}(α)`.
pub fn m_nu_monic_form(alpha: &AlphaGrid, n_mat: usize, nu: f64, sigma2: f64) -> Result<Complex64> {
    check_n(n_mat)?;
    check_nu(nu)?;
    check_sigma2(sigma2)?;
    check_distinct(alpha.values())?;
    let (b, c) = laguerre_coefficients(nu, sigma2);
    Ok(monic_ratio(alpha.values(), n_mat, b, c))
}

/// Class C or D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    C,
    D,
}

/// Both expressions for the class C/D average
/// `M_class(2n, α; 2N, σ²)`: the Laguerre form at `α^{⟨2⟩}` with
/// `ν = ±1/2`, and the odd (C) or even (D) Hermite form at `α`.
pub fn m_class_both(
    kind: ClassKind,
    alpha: &AlphaGrid,
    n_mat: usize,
    sigma2: f64,
) -> Result<(Complex64, Complex64)> {
    check_n(n_mat)?;
    check_sigma2(sigma2)?;
    let sq = alpha.squares();
    check_distinct(sq.values())?;
    let m = alpha.values().len();
    let nu = match kind {
        ClassKind::C => 0.5,
        ClassKind::D => -0.5,
    };
    let laguerre = m_nu_monic_form(&sq, n_mat, nu, sigma2)?;
    // det[Ĥ_{d_j}(α_k)] / h_{2n}(α²) = det[Ĥ_{d_j}[α_1..α_k]] / Π_{j<k} (α_j + α_k).
    let wide: Vec<WideComplex> = alpha.values().iter().map(|&a| widen(a)).collect();
    let top = 2 * (n_mat + m - 1) + 1;
    let (b, c) = hermite_coefficients(sigma2);
    let dd = monic_divided_differences(top, &wide, b, c);
    let mut entries = Vec::with_capacity(m * m);
    for j in 0..m {
        let degree = match kind {
            ClassKind::C => 2 * n_mat + 2 * j + 1,
            ClassKind::D => 2 * (n_mat + j),
        };
        entries.extend_from_slice(&dd[degree]);
    }
    let mut sums = Complex64::new(1.0, 0.0);
    for k in 0..m {
        for j in 0..k {
            sums *= alpha.values()[j] + alpha.values()[k];
        }
    }
    let mut hermite = narrow(det_in_place(&mut entries, m)) / sums;
    if kind == ClassKind::C {
        let prod: Complex64 = alpha.values().iter().product();
        if prod.norm() == 0.0 {
            return Err(Error::Singular("class C Hermite form at α = 0"));
        }
        hermite /= prod;
    }
    Ok((laguerre, hermite))
}

/// Class C/D average; both expressions are evaluated and must agree to
/// [`CLASS_FORM_TOL`]. Returns the Hermite expression.
pub fn m_class(kind: ClassKind, alpha: &AlphaGrid, n_mat: usize, sigma2: f64) -> Result<Complex64> {
    let (lag, her) = m_class_both(kind, alpha, n_mat, sigma2)?;
    let scale = lag.norm().max(her.norm()).max(1e-300);
    let err = (lag - her).norm() / scale;
    if err > CLASS_FORM_TOL {
        return Err(Error::Inconsistent {
            what: "class C/D expressions",
            rel_err: err,
            tol: CLASS_FORM_TOL,
        });
    }
    Ok(her)
}

/// Closed-form average for any ensemble kind (monic forms).
pub fn closed_form(spec: &EnsembleSpec, alpha: &AlphaGrid) -> Result<Complex64> {
    match spec.kind() {
        EnsembleKind::Gue => m_gue_monic_form(alpha, spec.n(), spec.sigma2()),
        EnsembleKind::ChGue => {
            m_nu_monic_form(alpha, spec.n(), spec.law_nu().unwrap_or(0.0), spec.sigma2())
        }
        EnsembleKind::ClassC => m_class(ClassKind::C, alpha, spec.n(), spec.sigma2()),
        EnsembleKind::ClassD => m_class(ClassKind::D, alpha, spec.n(), spec.sigma2()),
    }
}

/// `Π_m Π_j (α_m - X_j)` for one configuration; class C/D kinds use `α_m²`.
pub fn charpoly_product(kind: EnsembleKind, alpha: &[Complex64], x: &Configuration) -> Complex64 {
    let squared = matches!(kind, EnsembleKind::ClassC | EnsembleKind::ClassD);
    let mut prod = Complex64::new(1.0, 0.0);
    for &a in alpha {
        let a = if squared { a * a } else { a };
        for &v in x.iter() {
            prod *= a - v;
        }
    }
    prod
}

/// Monte Carlo estimate of the `m`-fold product average for any `m ≥ 1`.
pub fn mc_charpoly(
    spec: &EnsembleSpec,
    alpha: &[Complex64],
    samples: usize,
    seed: u64,
) -> Result<McReport> {
    if alpha.is_empty() {
        return Err(domain("need at least one evaluation point"));
    }
    let kind = spec.kind();
    mc_expectation(spec, |x| charpoly_product(kind, alpha, x), samples, seed)
}
