//! Special functions consumed by the determinantal formulas.
//!
//! Polynomials are evaluated over complex arguments by their three-term
//! recurrences. Bessel functions use their power series, truncated once a
//! term falls below [`SERIES_REL_TOL`] of the partial sum or after
//! [`SERIES_MAX_TERMS`] terms.

use num_complex::Complex64;

use crate::detkit::Scalar;
use crate::error::{domain, Error, Result};

/// Relative size below which a series term ends the summation.
pub const SERIES_REL_TOL: f64 = 1e-16;
/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 500;

/// A family of classical orthogonal polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyFamily {
    Hermite,
    /// Laguerre polynomials `L_n^ν` with index `ν > -1`.
    Laguerre {
        nu: f64,
    },
}

impl PolyFamily {
    pub fn laguerre(nu: f64) -> Result<Self> {
        check_nu(nu)?;
        Ok(PolyFamily::Laguerre { nu })
    }
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > -1.0 {
        Ok(())
    } else {
        Err(domain(format!("index ν = {nu} must exceed -1")))
    }
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if sigma2.is_finite() && sigma2 > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("variance σ² = {sigma2} must be positive")))
    }
}

/// Physicists' Hermite polynomial `H_n(z)`.
pub fn hermite(n: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * z;
    for k in 1..n {
        let next = 2.0 * z * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `[H_0(z), ..., H_n(z)]`.
pub fn hermite_all(n: usize, z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n >= 1 {
        out.push(2.0 * z);
    }
    for k in 1..n {
        let next = 2.0 * z * out[k] - 2.0 * k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^ν(z)`.
pub fn laguerre(n: usize, nu: f64, z: Complex64) -> Result<Complex64> {
    check_nu(nu)?;
    Ok(*laguerre_all(n, nu, z).last().expect("nonempty"))
}

/// `[L_0^ν(z), ..., L_n^ν(z)]`; `ν` is not validated.
pub(crate) fn laguerre_all(n: usize, nu: f64, z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Complex64::new(1.0, 0.0));
    if n >= 1 {
        out.push(1.0 + nu - z);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - z) * out[k] - (kf + nu) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// Monic Hermite polynomial `(σ²/2)^{ℓ/2} H_ℓ(α/√(2σ²))`, the monic
/// orthogonal polynomial for the centred Gaussian weight of variance `σ²`.
pub fn monic_hermite(l: usize, alpha: Complex64, sigma2: f64) -> Result<Complex64> {
    check_sigma2(sigma2)?;
    Ok(*monic_hermite_all(l, alpha, sigma2)
        .last()
        .expect("nonempty"))
}

/// `[Ĥ_0, ..., Ĥ_l]` by the monic recurrence `Ĥ_{k+1} = αĤ_k - kσ²Ĥ_{k-1}`.
pub(crate) fn monic_hermite_all(l: usize, alpha: Complex64, sigma2: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(l + 1);
    out.push(Complex64::new(1.0, 0.0));
    if l >= 1 {
        out.push(alpha);
    }
    for k in 1..l {
        let next = alpha * out[k] - k as f64 * sigma2 * out[k - 1];
        out.push(next);
    }
    out
}

/// Monic Laguerre polynomial `(-2σ²)^ℓ ℓ! L_ℓ^ν(α/2σ²)`.
pub fn monic_laguerre(l: usize, nu: f64, alpha: Complex64, sigma2: f64) -> Result<Complex64> {
    check_nu(nu)?;
    check_sigma2(sigma2)?;
    Ok(*monic_laguerre_all(l, nu, alpha, sigma2)
        .last()
        .expect("nonempty"))
}

/// `[L̂_0, ..., L̂_l]` by
/// `L̂_{k+1} = (α - 2σ²(2k+ν+1)) L̂_k - 4σ⁴ k(k+ν) L̂_{k-1}`.
pub(crate) fn monic_laguerre_all(
    l: usize,
    nu: f64,
    alpha: Complex64,
    sigma2: f64,
) -> Vec<Complex64> {
    let s = 2.0 * sigma2;
    let mut out = Vec::with_capacity(l + 1);
    out.push(Complex64::new(1.0, 0.0));
    if l >= 1 {
        out.push(alpha - s * (1.0 + nu));
    }
    for k in 1..l {
        let kf = k as f64;
        let next =
            (alpha - s * (2.0 * kf + nu + 1.0)) * out[k] - s * s * kf * (kf + nu) * out[k - 1];
        out.push(next);
    }
    out
}

/// Divided differences `D[k][i] = P_k[α_0, …, α_i]` for `k ≤ l` of the monic
/// family `P_{k+1} = (α - b_k) P_k - c_k P_{k-1}`.
///
/// Uses `(αg)[α_0..α_i] = α_i g[α_0..α_i] + g[α_0..α_{i-1}]`, so no
/// difference quotients are ever formed.
pub(crate) fn monic_divided_differences<T: Scalar>(
    l: usize,
    alpha: &[T],
    b: impl Fn(usize) -> f64,
    c: impl Fn(usize) -> f64,
) -> Vec<Vec<T>> {
    let m = alpha.len();
    let mut out = Vec::with_capacity(l + 1);
    let mut first = vec![T::ZERO; m];
    if m > 0 {
        first[0] = T::ONE;
    }
    out.push(first);
    for k in 0..l {
        let mut next = vec![T::ZERO; m];
        for i in 0..m {
            let mut v = (alpha[i] - T::real(b(k))) * out[k][i];
            if i > 0 {
                v = v + out[k][i - 1];
            }
            if k > 0 {
                v = v - T::real(c(k)) * out[k - 1][i];
            }
            next[i] = v;
        }
        out.push(next);
    }
    out
}

/// Recurrence coefficients `(b_k, c_k)` of the monic Hermite family.
pub(crate) fn hermite_coefficients(sigma2: f64) -> (impl Fn(usize) -> f64, impl Fn(usize) -> f64) {
    (|_| 0.0, move |k| k as f64 * sigma2)
}

/// Recurrence coefficients `(b_k, c_k)` of the monic Laguerre family.
pub(crate) fn laguerre_coefficients(
    nu: f64,
    sigma2: f64,
) -> (impl Fn(usize) -> f64, impl Fn(usize) -> f64) {
    let s = 2.0 * sigma2;
    (
        move |k| s * (2.0 * k as f64 + nu + 1.0),
        move |k| s * s * k as f64 * (k as f64 + nu),
    )
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `ln n!`.
pub fn log_factorial(n: usize) -> f64 {
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

/// `1/Γ(x)` for `x > 0`, exact at small integers.
fn recip_gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && x <= 30.0 {
        (1..x as usize).fold(1.0, |acc, k| acc / k as f64)
    } else if x < 170.0 {
        1.0 / statrs::function::gamma::gamma(x)
    } else {
        (-statrs::function::gamma::ln_gamma(x)).exp()
    }
}

/// `Σ_k z^k / (k! Γ(k+ν+1))`, the entire part of `I_ν`:
/// `I_ν(w) = (w/2)^ν F_ν(w²/4)`.
///
/// Requires `ν > -1`, so every `Γ(k+ν+1)` is finite and positive.
pub(crate) fn bessel_entire(nu: f64, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(recip_gamma(nu + 1.0), 0.0);
    let mut sum = term;
    for k in 1..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= z / (kf * (kf + nu));
        sum += term;
        if term.norm() < SERIES_REL_TOL * sum.norm() {
            break;
        }
    }
    sum
}

/// Modified Bessel function of the first kind `I_ν(z)`.
///
/// `z^ν` uses the principal branch `-π < arg z ≤ π`.
pub fn bessel_i(nu: f64, z: Complex64) -> Result<Complex64> {
    check_nu(nu)?;
    let half = z / 2.0;
    let lead = if nu == 0.0 {
        Complex64::new(1.0, 0.0)
    } else if half == Complex64::new(0.0, 0.0) {
        return if nu > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Ok(Complex64::new(f64::INFINITY, 0.0))
        };
    } else {
        (nu * half.ln()).exp()
    };
    Ok(lead * bessel_entire(nu, half * half))
}

/// Bessel function of the first kind `J_ν(x)` for real `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(x >= 0.0) {
        return Err(domain(format!("bessel_j requires x ≥ 0, got {x}")));
    }
    let half = x / 2.0;
    let lead = if nu == 0.0 {
        1.0
    } else if half == 0.0 {
        return Ok(if nu > 0.0 { 0.0 } else { f64::INFINITY });
    } else {
        half.powf(nu)
    };
    Ok(lead * bessel_entire(nu, Complex64::new(-half * half, 0.0)).re)
}

/// Both sides of the Christoffel–Darboux formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelDarboux {
    /// `Σ_{n<N} w_n P_n(x) P_n(y)`.
    pub sum: f64,
    /// The two-by-two determinant ratio form.
    pub ratio: f64,
}

/// Evaluate the Christoffel–Darboux kernel sum and its ratio form.
///
/// Hermite weights are `1/(2ⁿ n!)`; Laguerre weights are `n!/Γ(n+ν+1)`.
/// Fails with [`Error::Coincident`] when `x` and `y` are too close for the
/// ratio form to be meaningful; use [`christoffel_darboux_sum`] there.
pub fn christoffel_darboux_both(
    family: PolyFamily,
    n: usize,
    x: f64,
    y: f64,
) -> Result<ChristoffelDarboux> {
    if n == 0 {
        return Err(domain("Christoffel–Darboux kernel needs N ≥ 1"));
    }
    let sep = (x - y).abs();
    if sep <= 1e-10 * x.abs().max(y.abs()).max(1.0) {
        return Err(Error::Coincident { separation: sep });
    }
    let sum = christoffel_darboux_sum(family, n, x, y)?;
    let ratio = match family {
        PolyFamily::Hermite => {
            let hx = hermite_all(n, x.into());
            let hy = hermite_all(n, y.into());
            let num = hx[n].re * hy[n - 1].re - hy[n].re * hx[n - 1].re;
            let log_norm = n as f64 * 2f64.ln() + log_factorial(n - 1);
            num / (x - y) * (-log_norm).exp()
        }
        PolyFamily::Laguerre { nu } => {
            let lx = laguerre_all(n, nu, x.into());
            let ly = laguerre_all(n, nu, y.into());
            let num = lx[n].re * ly[n - 1].re - ly[n].re * lx[n - 1].re;
            let log_c = log_factorial(n) - log_gamma(n as f64 + nu)?;
            -log_c.exp() * num / (x - y)
        }
    };
    Ok(ChristoffelDarboux { sum, ratio })
}

/// The direct Christoffel–Darboux sum `Σ_{n<N} w_n P_n(x) P_n(y)`.
pub fn christoffel_darboux_sum(family: PolyFamily, n: usize, x: f64, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("Christoffel–Darboux kernel needs N ≥ 1"));
    }
    match family {
        PolyFamily::Hermite => {
            let hx = hermite_all(n - 1, x.into());
            let hy = hermite_all(n - 1, y.into());
            let mut w = 1.0;
            let mut acc = 0.0;
            for k in 0..n {
                if k > 0 {
                    w /= 2.0 * k as f64;
                }
                acc += w * hx[k].re * hy[k].re;
            }
            Ok(acc)
        }
        PolyFamily::Laguerre { nu } => {
            check_nu(nu)?;
            let lx = laguerre_all(n - 1, nu, x.into());
            let ly = laguerre_all(n - 1, nu, y.into());
            let mut acc = 0.0;
            for k in 0..n {
                let w = (log_factorial(k) - log_gamma(k as f64 + nu + 1.0)?).exp();
                acc += w * lx[k].re * ly[k].re;
            }
            Ok(acc)
        }
    }
}

/// Christoffel–Darboux kernel value; both forms are computed and must agree
/// to `1e-10` relative to the size of the individual terms.
pub fn christoffel_darboux(family: PolyFamily, n: usize, x: f64, y: f64) -> Result<f64> {
    let cd = christoffel_darboux_both(family, n, x, y)?;
    let scale = christoffel_darboux_sum(family, n, x, x)?.abs().sqrt()
        * christoffel_darboux_sum(family, n, y, y)?.abs().sqrt();
    let rel_err =
        (cd.sum - cd.ratio).abs() / cd.sum.abs().max(cd.ratio.abs()).max(scale).max(1e-300);
    if rel_err > 1e-10 {
        return Err(Error::Inconsistent {
            what: "Christoffel–Darboux sum vs ratio",
            rel_err,
            tol: 1e-10,
        });
    }
    Ok(cd.sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    // Independent oracles: explicit series from the defining sums.
    /// Explicit sum and the sum of the moduli of its terms, which bounds
    /// the rounding error of either evaluation.
    fn hermite_series(n: usize, z: Complex64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for k in 0..=n / 2 {
            let fact = |m: usize| (1..=m as u128).product::<u128>();
            let coef = (fact(n) / (fact(k) * fact(n - 2 * k))) as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * coef * (2.0 * z).powu((n - 2 * k) as u32);
            mass += term.norm();
            acc += term;
        }
        (acc, mass)
    }

    fn laguerre_series(n: usize, nu: f64, z: Complex64) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for k in 0..=n {
            // binom(n+ν, n-k) / k! as a product of ratios.
            let mut coef = 1.0;
            for j in 1..=n - k {
                coef *= (k as f64 + nu + j as f64) / j as f64;
            }
            for j in 1..=k {
                coef /= j as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * coef * z.powu(k as u32);
            mass += term.norm();
            acc += term;
        }
        (acc, mass)
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, Complex64::new(3.0, -1.0)), c(1.0));
        assert!((hermite(2, c(1.0)) - c(2.0)).norm() < 1e-14);
        assert!((hermite(3, c(1.0)) - c(-4.0)).norm() < 1e-14);
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 0.7, Complex64::new(2.0, 1.0)).unwrap(), c(1.0));
        assert!(laguerre(1, 0.0, c(1.0)).unwrap().norm() < 1e-15);
        assert!((laguerre(2, 1.0, c(0.0)).unwrap() - c(3.0)).norm() < 1e-14);
        assert!(matches!(laguerre(2, -1.0, c(0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn recurrence_matches_series() {
        let pts = [
            Complex64::new(-4.7, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(2.2, 1.9),
            Complex64::new(0.0, -3.1),
            Complex64::new(4.9, 0.4),
        ];
        for n in 0..=20 {
            for &z in &pts {
                let r = hermite(n, z);
                let (s, mass) = hermite_series(n, z);
                assert!(
                    (r - s).norm() <= 1e-10 * s.norm().max(1.0) + 1e-14 * mass,
                    "H_{n}({z})"
                );
                for nu in [-0.5, 0.0, 0.5, 2.3] {
                    let r = laguerre(n, nu, z).unwrap();
                    let (s, mass) = laguerre_series(n, nu, z);
                    assert!(
                        (r - s).norm() <= 1e-10 * s.norm().max(1.0) + 1e-14 * mass,
                        "L_{n}^{nu}({z}): {r} vs {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn monic_examples() {
        let a = Complex64::new(0.7, -1.3);
        assert_eq!(monic_hermite(0, a, 2.0).unwrap(), c(1.0));
        assert!((monic_hermite(1, a, 2.0).unwrap() - a).norm() < 1e-15);
        assert!((monic_hermite(2, a, 1.0).unwrap() - (a * a - 1.0)).norm() < 1e-14);
        assert_eq!(monic_laguerre(0, 0.3, a, 0.2).unwrap(), c(1.0));
        assert!((monic_laguerre(1, 0.0, a, 0.5).unwrap() - (a - 1.0)).norm() < 1e-15);
        let (nu, s2) = (1.7, 0.3);
        assert!(
            (monic_laguerre(1, nu, a, s2).unwrap() - (a - 2.0 * s2 * (1.0 + nu))).norm() < 1e-14
        );
        assert!(monic_hermite(1, a, 0.0).is_err());
        assert!(monic_laguerre(1, -1.5, a, 1.0).is_err());
    }

    #[test]
    fn monic_recurrences_match_scaled_definitions() {
        for l in 0..15 {
            for &(a, s2) in &[(Complex64::new(1.3, 0.4), 0.7f64), (c(-2.1), 1.9)] {
                let h = (s2 / 2.0).powf(l as f64 / 2.0) * hermite(l, a / (2.0 * s2).sqrt());
                let m = monic_hermite(l, a, s2).unwrap();
                assert!((h - m).norm() / m.norm().max(1.0) < 1e-11);
                for nu in [-0.5, 0.0, 2.3] {
                    let def = (-2.0 * s2).powi(l as i32)
                        * log_factorial(l).exp()
                        * laguerre(l, nu, a / (2.0 * s2)).unwrap();
                    let m = monic_laguerre(l, nu, a, s2).unwrap();
                    assert!((def - m).norm() / m.norm().max(1.0) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn monic_leading_coefficient_by_finite_differences() {
        // The ℓ-th forward difference with unit step of a degree-ℓ polynomial
        // is ℓ! times its leading coefficient.
        for l in 0..10 {
            // Returns the difference and a rounding bound for it.
            let diff = |f: &dyn Fn(f64) -> Complex64| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut scale = 0.0;
                let fact = log_factorial(l).exp();
                for k in 0..=l {
                    let binom = (log_factorial(l) - log_factorial(k) - log_factorial(l - k)).exp();
                    let sign = if (l - k) % 2 == 0 { 1.0 } else { -1.0 };
                    let v = f(k as f64 - l as f64 / 2.0);
                    acc += sign * binom * v;
                    scale += binom * v.norm();
                }
                (acc / fact, 1e-12 + 1e-13 * scale / fact)
            };
            let (lead_h, tol_h) = diff(&|x| monic_hermite(l, c(x), 0.8).unwrap());
            let (lead_l, tol_l) = diff(&|x| monic_laguerre(l, 0.5, c(x), 0.8).unwrap());
            assert!((lead_h - c(1.0)).norm() < tol_h, "Ĥ_{l}: {lead_h}");
            assert!((lead_l - c(1.0)).norm() < tol_l, "L̂_{l}: {lead_l}");
        }
    }

    #[test]
    fn hermite_laguerre_half_index_bridges() {
        for n in 0..=10 {
            for i in 0..=16 {
                let x = -4.0 + 0.5 * i as f64;
                let nf = n as f64;
                let lhs = x * laguerre(n, 0.5, c(x * x / 2.0)).unwrap().re;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let rhs = sign
                    * (-(2.0 * nf + 0.5) * 2f64.ln() - log_factorial(n)).exp()
                    * hermite(2 * n + 1, c(x / 2f64.sqrt())).re;
                assert!(crate::rel_err_f64(lhs, rhs) < 1e-10 || (lhs - rhs).abs() < 1e-12);
                let lhs = laguerre(n, -0.5, c(x * x / 2.0)).unwrap().re;
                let rhs = sign
                    * (-(2.0 * nf) * 2f64.ln() - log_factorial(n)).exp()
                    * hermite(2 * n, c(x / 2f64.sqrt())).re;
                assert!(crate::rel_err_f64(lhs, rhs) < 1e-10 || (lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_i(0.0, c(0.0)).unwrap(), c(1.0));
        let expect = (2.0 / PI).sqrt() * 1f64.sinh();
        assert!((bessel_i(0.5, c(1.0)).unwrap() - c(expect)).norm() < 1e-14);
        assert!((expect - 0.93768).abs() < 1e-5);
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-12);
        assert!((bessel_j(0.0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!(bessel_i(-1.0, c(1.0)).is_err());
        assert!(bessel_j(0.0, -1.0).is_err());
    }

    #[test]
    fn bessel_i_on_imaginary_axis_is_bessel_j() {
        for nu in [0.0, 1.0, 2.0] {
            for w in [0.1, 1.0, 3.7, 9.0] {
                let i = bessel_i(nu, Complex64::new(0.0, w)).unwrap();
                // I_ν(iw) = i^ν J_ν(w)
                let phase = Complex64::new(0.0, nu * PI / 2.0).exp();
                let j = bessel_j(nu, w).unwrap();
                assert!((i - phase * j).norm() < 1e-12, "ν={nu} w={w}");
            }
        }
        let w = 2.5;
        assert!(
            (bessel_i(0.0, Complex64::new(0.0, w)).unwrap().re - bessel_j(0.0, w).unwrap()).abs()
                < 1e-14
        );
    }

    #[test]
    fn half_integer_closed_forms() {
        for x in [0.2f64, 1.0, 4.0, 11.0] {
            let i = bessel_i(0.5, c(x)).unwrap().re;
            let ci = (2.0 / (PI * x)).sqrt() * x.sinh();
            assert!(crate::rel_err_f64(i, ci) < 1e-13);
            let j = bessel_j(0.5, x).unwrap();
            let cj = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((j - cj).abs() < 1e-11);
            let im = bessel_i(-0.5, c(x)).unwrap().re;
            assert!(crate::rel_err_f64(im, (2.0 / (PI * x)).sqrt() * x.cosh()) < 1e-13);
        }
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-12);
        assert!((log_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-12);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-12);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-2.5).is_err());
    }

    #[test]
    fn christoffel_darboux_examples() {
        let h = PolyFamily::Hermite;
        assert!((christoffel_darboux(h, 1, 0.3, -1.2).unwrap() - 1.0).abs() < 1e-15);
        assert!((christoffel_darboux(h, 2, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let l0 = PolyFamily::laguerre(0.0).unwrap();
        let (x, y) = (0.4, 2.9);
        let v = christoffel_darboux(l0, 2, x, y).unwrap();
        assert!((v - (1.0 + (1.0 - x) * (1.0 - y))).abs() < 1e-14);
        assert!(matches!(
            christoffel_darboux_both(h, 3, 1.0, 1.0),
            Err(Error::Coincident { .. })
        ));
        assert!(christoffel_darboux_sum(h, 3, 1.0, 1.0).is_ok());
    }

    #[test]
    fn christoffel_darboux_forms_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in 1..=12 {
            for _ in 0..100 {
                let x = rng.random_range(-4.0..4.0);
                let y = rng.random_range(-4.0..4.0);
                christoffel_darboux(PolyFamily::Hermite, n, x, y).unwrap();
                let nu = rng.random_range(-0.9..3.0);
                let (x, y) = (x.abs() * 2.0, y.abs() * 2.0);
                christoffel_darboux(PolyFamily::laguerre(nu).unwrap(), n, x, y).unwrap();
            }
        }
    }
}
