//! The biorthogonal functions `φ^{(±)}_n`, `φ^{(ν,±)}_n`, the correlation
//! kernels of the noncolliding processes started from a configuration `ξ`,
//! their correlation functions and multitime densities.
//!
//! `φ^{(+)}_n(t, x; ξ)` is the contour integral of `p(t, x|s)/Π_{a∈ξ_{n+1}}(s-a)`
//! around the atoms of `ξ_{n+1}`; it is evaluated as a sum of residues, with
//! poles of any order handled by Taylor expansion. `φ^{(-)}_n(t, x; ξ)` is a
//! monic polynomial of degree `n` in `x`, evaluated through its moment
//! expansion.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::{Configuration, InitialConfig};
use crate::densities::{besq_positive, gauss, km_det_besq_unchecked, km_det_bm_unchecked};
use crate::detkit::{det_in_place, vandermonde_product};
use crate::error::{domain, Error, Result};
use crate::quad::integrate_half_line;
use crate::series::Series;
use crate::specfun::{
    bessel_entire, check_nu, hermite_all, laguerre_all, log_factorial, log_gamma,
    monic_hermite_all, monic_laguerre_all,
};

/// Which noncolliding process: Brownian motion or squared Bessel with
/// index `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Bm,
    Besq { nu: f64 },
}

impl Family {
    pub fn besq(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(Family::Besq { nu })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Bm => "bm",
            Family::Besq { .. } => "besq",
        }
    }

    /// Positive-time transition density `p(t, y|x)`.
    pub fn density(&self, t: f64, y: f64, x: f64) -> f64 {
        match *self {
            Family::Bm => gauss(t, y, x),
            Family::Besq { nu } => besq_positive(nu, t, y, x),
        }
    }

    fn validate(&self) -> Result<()> {
        if let Family::Besq { nu } = self {
            check_nu(*nu)?;
        }
        Ok(())
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(if t == 0.0 {
            Error::DeltaMeasure
        } else {
            domain(format!("time must be positive, got {t}"))
        });
    }
    Ok(())
}

fn check_index(n: usize, xi: &InitialConfig) -> Result<()> {
    if n >= xi.len() {
        return Err(domain(format!(
            "index n = {n} must be below N = {}",
            xi.len()
        )));
    }
    Ok(())
}

/// Residue sum `Σ_a Res_{s=a} g(s)/Π_{b∈ξ_{n+1}}(s-b)` where `taylor(a, m)`
/// returns the first `m` Taylor coefficients of the entire factor `g` at `a`.
fn residue_sum(atoms: &[(f64, usize)], taylor: impl Fn(f64, usize) -> Series) -> f64 {
    let mut total = 0.0;
    for (i, &(a, m)) in atoms.iter().enumerate() {
        let mut acc = taylor(a, m);
        for (j, &(b, mb)) in atoms.iter().enumerate() {
            if i != j {
                acc = acc.mul(&Series::inverse_power(a - b, mb, m));
            }
        }
        total += acc.0[m - 1];
    }
    total
}

fn bm_taylor(t: f64, x: f64, a: f64, m: usize) -> Series {
    // p(t, x|a+h) = p(t, x|a) exp((x-a)h/t - h²/2t)
    let e = Series::exp_of(&[0.0, (x - a) / t, -0.5 / t], m);
    let base = gauss(t, x, a);
    Series(e.0.into_iter().map(|c| c * base).collect())
}

fn besq_taylor(nu: f64, t: f64, x: f64, a: f64, m: usize) -> Series {
    // p^{(ν)}(t, x|s) = (1/2t)(x/2t)^ν e^{-(x+s)/2t} F_ν(xs/4t²), and
    // F_ν' = F_{ν+1}.
    let scale = 2.0 * t;
    let lead = if nu == 0.0 { 1.0 } else { (x / scale).powf(nu) };
    let base = lead * (-(x + a) / scale).exp() / scale;
    let c = x / (scale * scale);
    let mut f = Vec::with_capacity(m);
    let mut ck = 1.0;
    for k in 0..m {
        if k > 0 {
            ck *= c / k as f64;
        }
        f.push(ck * bessel_entire(nu + k as f64, Complex64::new(c * a, 0.0)).re);
    }
    let e = Series::exp_of(&[0.0, -1.0 / scale], m);
    let g = e.mul(&Series(f));
    Series(g.0.into_iter().map(|v| v * base).collect())
}

/// `φ^{(+)}_n(t, x; ξ)` by residues at the atoms of `ξ_{n+1}`, any
/// multiplicities.
pub fn phi_plus_residue(n: usize, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    check_t(t)?;
    check_index(n, xi)?;
    Ok(residue_sum(&xi.support(n + 1), |a, m| {
        bm_taylor(t, x, a, m)
    }))
}

/// `φ^{(+)}_n(t, x; Nδ_0) = t^{-(n+1)/2} 2^{-n/2}/(n!√(2π)) H_n(x/√(2t)) e^{-x²/2t}`.
pub fn phi_plus_origin(n: usize, t: f64, x: f64) -> Result<f64> {
    check_t(t)?;
    let h = hermite_all(n, Complex64::new(x / (2.0 * t).sqrt(), 0.0))[n].re;
    let log_c = -(n as f64 + 1.0) / 2.0 * t.ln()
        - n as f64 / 2.0 * std::f64::consts::LN_2
        - log_factorial(n);
    Ok(log_c.exp() / (2.0 * PI).sqrt() * h * (-x * x / (2.0 * t)).exp())
}

/// `φ^{(+)}_n(t, x; ξ)`; `ξ = Nδ_0` uses the Hermite closed form.
pub fn phi_plus(n: usize, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    check_index(n, xi)?;
    if xi.is_origin() {
        phi_plus_origin(n, t, x)
    } else {
        phi_plus_residue(n, t, x, xi)
    }
}

/// `φ^{(-)}_n(t, x; ξ) = E[Π_{a∈ξ_n}(x + i√t Z - a)]`, `Z` standard normal:
/// the product is expanded in `w = i√t Z` and `E[w^{2k}] = (-t)^k (2k-1)!!`.
pub fn phi_minus(n: usize, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    check_t(t)?;
    if n > xi.len() {
        return Err(domain(format!("index n = {n} exceeds N = {}", xi.len())));
    }
    let coeffs = shifted_product(x, xi.truncation(n));
    let mut acc = 0.0;
    let mut moment = 1.0;
    for (k, c) in coeffs.iter().enumerate().step_by(2) {
        if k > 0 {
            moment *= -t * (k as f64 - 1.0);
        }
        acc += c * moment;
    }
    Ok(acc)
}

/// Coefficients of `Π_a (w + x - a)` in powers of `w`.
fn shifted_product(x: f64, atoms: &[f64]) -> Vec<f64> {
    let mut coeffs = vec![1.0];
    for &a in atoms {
        let d = x - a;
        let mut next = vec![0.0; coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += d * c;
            next[k + 1] += c;
        }
        coeffs = next;
    }
    coeffs
}

/// `φ^{(-)}_n(t, x; Nδ_0) = t^{n/2} 2^{-n/2} H_n(x/√(2t))`, i.e. the monic
/// Hermite polynomial `Ĥ_n(x; t)`.
pub fn phi_minus_origin(n: usize, t: f64, x: f64) -> Result<f64> {
    check_t(t)?;
    Ok(monic_hermite_all(n, Complex64::new(x, 0.0), t)[n].re)
}

/// `φ^{(ν,+)}_n(t, x; ξ)` by residues.
pub fn phi_nu_plus_residue(n: usize, nu: f64, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    check_index(n, xi)?;
    check_nonneg(x, xi)?;
    Ok(residue_sum(&xi.support(n + 1), |a, m| {
        besq_taylor(nu, t, x, a, m)
    }))
}

fn check_nonneg(x: f64, xi: &InitialConfig) -> Result<()> {
    if x < 0.0 || xi.atoms().iter().any(|&a| a < 0.0) {
        return Err(domain("squared Bessel positions must be nonnegative"));
    }
    Ok(())
}

/// `φ^{(ν,+)}_n(t, x; Nδ_0) =
/// t^{-(n+1)} (-1)^n 2^{-(n+ν+1)}/Γ(n+ν+1) (x/t)^ν e^{-x/2t} L_n^ν(x/2t)`.
pub fn phi_nu_plus_origin(n: usize, nu: f64, t: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    if x < 0.0 {
        return Err(domain("squared Bessel positions must be nonnegative"));
    }
    let nf = n as f64;
    let l = laguerre_all(n, nu, Complex64::new(x / (2.0 * t), 0.0))[n].re;
    let log_c =
        -(nf + 1.0) * t.ln() - (nf + nu + 1.0) * std::f64::consts::LN_2 - log_gamma(nf + nu + 1.0)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let power = if nu == 0.0 { 1.0 } else { (x / t).powf(nu) };
    Ok(sign * log_c.exp() * power * (-x / (2.0 * t)).exp() * l)
}

/// `φ^{(ν,+)}_n(t, x; ξ)`; `ξ = Nδ_0` uses the Laguerre closed form.
pub fn phi_nu_plus(n: usize, nu: f64, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    check_index(n, xi)?;
    if xi.is_origin() {
        phi_nu_plus_origin(n, nu, t, x)
    } else {
        phi_nu_plus_residue(n, nu, t, x, xi)
    }
}

/// `φ^{(ν,-)}_n(t, x; Nδ_0) = t^n (-1)^n 2^n n! L_n^ν(x/2t)`, the monic
/// Laguerre polynomial `L̂^ν_n(x; t)`.
pub fn phi_nu_minus_origin(n: usize, nu: f64, t: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    Ok(monic_laguerre_all(n, nu, Complex64::new(x, 0.0), t)[n].re)
}

/// `φ^{(ν,-)}_n(t, x; ξ) = ∫_{R_-} p^{(ν)}(-t, s|x) Π_{a∈ξ_n}(s-a) ds`.
///
/// The backward density's moments are the monic Laguerre polynomials,
/// `∫_{R_-} p^{(ν)}(-t, s|x) s^k ds = L̂^ν_k(x; t)`, so expanding the
/// product in powers of `s` gives the integral exactly.
pub fn phi_nu_minus(n: usize, nu: f64, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    if n > xi.len() {
        return Err(domain(format!("index n = {n} exceeds N = {}", xi.len())));
    }
    let coeffs = shifted_product(0.0, xi.truncation(n));
    let moments = monic_laguerre_all(n, nu, Complex64::new(x, 0.0), t);
    Ok(coeffs.iter().zip(&moments).map(|(c, m)| c * m.re).sum())
}

/// [`phi_nu_minus`] by direct quadrature of the defining integral, using
/// the real negative-time form of the squared Bessel density.
///
/// The integrand oscillates with amplitude growing like `e^{x/2t}`, so this
/// route loses accuracy once `x/t` exceeds a few units.
pub fn phi_nu_minus_quadrature(
    n: usize,
    nu: f64,
    t: f64,
    x: f64,
    xi: &InitialConfig,
) -> Result<f64> {
    check_nu(nu)?;
    check_t(t)?;
    if n > xi.len() {
        return Err(domain(format!("index n = {n} exceeds N = {}", xi.len())));
    }
    let atoms = xi.truncation(n);
    let f = |r: f64| {
        let prod: f64 = atoms.iter().map(|a| -r - a).product();
        crate::densities::besq_negative(nu, t, r, x) * prod
    };
    integrate_half_line(f, 0.0, t, t, 1e-12)
}

fn phi_minus_any(n: usize, t: f64, x: f64, xi: &InitialConfig) -> Result<f64> {
    if xi.is_origin() {
        phi_minus_origin(n, t, x)
    } else {
        phi_minus(n, t, x, xi)
    }
}

/// `φ^{(+)}_n` of either family.
pub fn phi_plus_family(
    family: Family,
    n: usize,
    t: f64,
    x: f64,
    xi: &InitialConfig,
) -> Result<f64> {
    match family {
        Family::Bm => phi_plus(n, t, x, xi),
        Family::Besq { nu } => phi_nu_plus(n, nu, t, x, xi),
    }
}

/// `φ^{(-)}_n` of either family.
pub fn phi_minus_family(
    family: Family,
    n: usize,
    t: f64,
    x: f64,
    xi: &InitialConfig,
) -> Result<f64> {
    match family {
        Family::Bm => phi_minus_any(n, t, x, xi),
        Family::Besq { nu } => phi_nu_minus(n, nu, t, x, xi),
    }
}

fn check_sizes(y: &[f64], xi: &InitialConfig) -> Result<()> {
    if y.len() != xi.len() {
        return Err(Error::Dimension {
            expected: xi.len(),
            got: y.len(),
        });
    }
    Ok(())
}

/// `h^{(+)}_N(t, y; ξ) = det[φ^{(+)}_{j-1}(t, y_k; ξ)]`.
pub fn h_plus_det(family: Family, t: f64, y: &[f64], xi: &InitialConfig) -> Result<f64> {
    family.validate()?;
    check_sizes(y, xi)?;
    let n = y.len();
    let mut m = Vec::with_capacity(n * n);
    for j in 0..n {
        for &yk in y {
            m.push(phi_plus_family(family, j, t, yk, xi)?);
        }
    }
    Ok(det_in_place(&mut m, n))
}

/// `h^{(-)}_N(t, y; ξ) = h_N(y)`, independent of `t` and `ξ` because the
/// `φ^{(-)}_n` are monic.
pub fn h_minus_det(y: &[f64]) -> Result<f64> {
    vandermonde_product(y, y.len())
}

/// `det[φ^{(-)}_{j-1}(t, y_k; ξ)]` computed from the functions themselves.
pub fn h_minus_det_phi(family: Family, t: f64, y: &[f64], xi: &InitialConfig) -> Result<f64> {
    family.validate()?;
    check_sizes(y, xi)?;
    let n = y.len();
    let mut m = Vec::with_capacity(n * n);
    for j in 0..n {
        for &yk in y {
            m.push(phi_minus_family(family, j, t, yk, xi)?);
        }
    }
    Ok(det_in_place(&mut m, n))
}

/// Extended Hermite kernel at equal times `T`:
/// `e^{-x²/2T}/√(2πT) Σ_{n<N} H_n(x/√(2T)) H_n(y/√(2T)) / (2ⁿ n!)`.
pub fn ext_hermite_kernel(n: usize, big_t: f64, x: f64, y: f64) -> Result<f64> {
    check_t(big_t)?;
    if n == 0 {
        return Err(domain("kernel needs N ≥ 1"));
    }
    let s = (2.0 * big_t).sqrt();
    let hx = hermite_all(n - 1, Complex64::new(x / s, 0.0));
    let hy = hermite_all(n - 1, Complex64::new(y / s, 0.0));
    let mut w = 1.0;
    let mut acc = 0.0;
    for k in 0..n {
        if k > 0 {
            w /= 2.0 * k as f64;
        }
        acc += w * hx[k].re * hy[k].re;
    }
    Ok((-x * x / (2.0 * big_t)).exp() / (2.0 * PI * big_t).sqrt() * acc)
}

/// Extended Laguerre kernel at equal times `T`:
/// `x^ν e^{-x/2T}/(2T)^{ν+1} Σ_{n<N} n!/Γ(n+ν+1) L_n^ν(x/2T) L_n^ν(y/2T)`.
pub fn ext_laguerre_kernel(n: usize, nu: f64, big_t: f64, x: f64, y: f64) -> Result<f64> {
    check_nu(nu)?;
    check_t(big_t)?;
    if n == 0 {
        return Err(domain("kernel needs N ≥ 1"));
    }
    if x < 0.0 || y < 0.0 {
        return Err(domain("squared Bessel positions must be nonnegative"));
    }
    let s = 2.0 * big_t;
    let lx = laguerre_all(n - 1, nu, Complex64::new(x / s, 0.0));
    let ly = laguerre_all(n - 1, nu, Complex64::new(y / s, 0.0));
    let mut acc = 0.0;
    for k in 0..n {
        let w = (log_factorial(k) - log_gamma(k as f64 + nu + 1.0)?).exp();
        acc += w * lx[k].re * ly[k].re;
    }
    let power = if nu == 0.0 { 1.0 } else { x.powf(nu) };
    Ok(power * (-x / s).exp() / s.powf(nu + 1.0) * acc)
}

/// Correlation kernel
/// `K^ξ(s, x; t, y) = Σ_{n<N} φ^{(+)}_n(s, x; ξ) φ^{(-)}_n(t, y; ξ) - 1(s>t) p(s-t, x|y)`.
///
/// `ξ` must have distinct atoms or be `Nδ_0`; other multiplicity patterns
/// are rejected.
pub fn corr_kernel(
    family: Family,
    s: f64,
    x: f64,
    t: f64,
    y: f64,
    xi: &InitialConfig,
) -> Result<f64> {
    family.validate()?;
    check_t(s)?;
    check_t(t)?;
    if !xi.is_origin() && !xi.is_distinct() {
        return Err(Error::Unsupported(
            "correlation kernel for initial configurations with repeated atoms other than Nδ_0"
                .into(),
        ));
    }
    if let Family::Besq { .. } = family {
        check_nonneg(x.min(y), xi)?;
    }
    let mut acc = 0.0;
    for n in 0..xi.len() {
        let plus = phi_plus_family(family, n, s, x, xi)?;
        let minus = phi_minus_family(family, n, t, y, xi)?;
        acc += plus * minus;
    }
    if s > t {
        acc -= family.density(s - t, x, y);
    }
    Ok(acc)
}

/// A block of points observed at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeBlock {
    pub t: f64,
    pub points: Vec<f64>,
}

/// The correlation kernel matrix over space-time blocks, row-major.
pub fn kernel_matrix(
    family: Family,
    blocks: &[TimeBlock],
    xi: &InitialConfig,
) -> Result<(Vec<f64>, usize)> {
    let pts: Vec<(f64, f64)> = blocks
        .iter()
        .flat_map(|b| b.points.iter().map(move |&x| (b.t, x)))
        .collect();
    let n = pts.len();
    let mut m = Vec::with_capacity(n * n);
    for &(s, x) in &pts {
        for &(t, y) in &pts {
            m.push(corr_kernel(family, s, x, t, y, xi)?);
        }
    }
    Ok((m, n))
}

/// Multitime correlation function: the determinant of the kernel over all
/// points of all blocks. Blocks must be ordered in time.
pub fn corr_fn(family: Family, blocks: &[TimeBlock], xi: &InitialConfig) -> Result<f64> {
    if blocks.is_empty() || blocks.iter().any(|b| b.points.is_empty()) {
        return Err(domain("correlation function needs nonempty blocks"));
    }
    if blocks.windows(2).any(|w| w[1].t <= w[0].t) {
        return Err(domain("time blocks must be strictly increasing in time"));
    }
    let (mut m, n) = kernel_matrix(family, blocks, xi)?;
    Ok(det_in_place(&mut m, n))
}

/// Multitime density
/// `h^{(-)}(x^{(M)}) Π_{m<M} f(t_{m+1}-t_m; x^{(m+1)}|x^{(m)}) h^{(+)}(t_1, x^{(1)}; ξ)`
/// on the product of ordered sectors.
pub fn multitime_pdf(
    family: Family,
    times: &[f64],
    configs: &[Configuration],
    xi: &InitialConfig,
) -> Result<f64> {
    family.validate()?;
    if times.is_empty() || times.len() != configs.len() {
        return Err(Error::Dimension {
            expected: times.len(),
            got: configs.len(),
        });
    }
    check_t(times[0])?;
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("times must be strictly increasing"));
    }
    for c in configs {
        check_sizes(c, xi)?;
        if let Family::Besq { .. } = family {
            if !c.is_nonnegative() {
                return Err(domain("squared Bessel configurations must be nonnegative"));
            }
        }
    }
    let mut value = h_plus_det(family, times[0], &configs[0], xi)?;
    for m in 1..times.len() {
        let dt = times[m] - times[m - 1];
        value *= match family {
            Family::Bm => km_det_bm_unchecked(dt, &configs[m], &configs[m - 1]),
            Family::Besq { nu } => km_det_besq_unchecked(nu, dt, &configs[m], &configs[m - 1]),
        };
    }
    Ok(value * h_minus_det(configs.last().expect("nonempty"))?)
}
