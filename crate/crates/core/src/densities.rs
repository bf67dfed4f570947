//! Transition densities of Brownian motion and of the squared Bessel
//! process, and the Karlin–McGregor determinants built from them.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::Configuration;
use crate::detkit::det_in_place;
use crate::error::{domain, Error, Result};
use crate::specfun::{bessel_entire, check_nu};

/// A signed time and a complex position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimePoint {
    pub t: f64,
    pub x: Complex64,
}

impl SpaceTimePoint {
    pub fn new(t: f64, x: Complex64) -> Result<Self> {
        if !t.is_finite() || !x.re.is_finite() || !x.im.is_finite() {
            return Err(domain("space-time point must be finite"));
        }
        Ok(Self { t, x })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t == 0.0 {
        return Err(Error::DeltaMeasure);
    }
    if !t.is_finite() {
        return Err(domain(format!("time must be finite, got {t}")));
    }
    Ok(())
}

/// Brownian transition density `p(t, y|x) = (2π|t|)^{-1/2} e^{-(x-y)²/2t}`,
/// continued to complex endpoints and negative `t`.
pub fn bm_kernel(t: f64, y: Complex64, x: Complex64) -> Result<Complex64> {
    check_time(t)?;
    let d = x - y;
    Ok((-(d * d) / (2.0 * t)).exp() / (2.0 * PI * t.abs()).sqrt())
}

/// Real-endpoint Brownian density for `t > 0`; no error checking.
pub(crate) fn gauss(t: f64, y: f64, x: f64) -> f64 {
    let d = x - y;
    (-d * d / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

/// `p^{(ν)}(t, y|x)` written through the entire function
/// `F_ν(z) = Σ z^k/(k! Γ(k+ν+1))`: for `t > 0`,
/// `p = (1/2t) (y/2t)^ν e^{-(x+y)/2t} F_ν(xy/4t²)`,
/// which covers the `x = 0` branch without a separate case.
pub(crate) fn besq_positive(nu: f64, t: f64, y: f64, x: f64) -> f64 {
    let scale = 2.0 * t;
    let lead = if nu == 0.0 { 1.0 } else { (y / scale).powf(nu) };
    let f = bessel_entire(nu, Complex64::new(x * y / (scale * scale), 0.0)).re;
    lead * (-(x + y) / scale).exp() * f / scale
}

/// Negative-time density `p^{(ν)}(-τ, -r|x)` with `τ > 0`, `r ≥ 0`, `x ≥ 0`.
///
/// On this ray the phase of `(-r)^{ν/2}` cancels the one picked up by
/// `I_ν` at imaginary argument, leaving the real expression
/// `(1/2τ) (r/x)^{ν/2} e^{(x-r)/2τ} J_ν(√(xr)/τ)
///  = (1/2τ) (r/2τ)^ν e^{(x-r)/2τ} F_ν(-xr/4τ²)`.
pub(crate) fn besq_negative(nu: f64, tau: f64, r: f64, x: f64) -> f64 {
    let scale = 2.0 * tau;
    let lead = if nu == 0.0 { 1.0 } else { (r / scale).powf(nu) };
    let f = bessel_entire(nu, Complex64::new(-x * r / (scale * scale), 0.0)).re;
    lead * ((x - r) / scale).exp() * f / scale
}

/// Squared-Bessel transition density `p^{(ν)}(t, y|x)`.
///
/// For `t > 0` both endpoints must be nonnegative. For `t < 0` only the
/// ray used by the biorthogonal functions is supported: `y ≤ 0` and
/// `x ≥ 0`, where the density is real.
pub fn besq_kernel(nu: f64, t: f64, y: f64, x: f64) -> Result<f64> {
    check_nu(nu)?;
    check_time(t)?;
    if !y.is_finite() || !x.is_finite() {
        return Err(domain("positions must be finite"));
    }
    if t > 0.0 {
        if x < 0.0 || y < 0.0 {
            return Err(domain(format!(
                "positive-time squared Bessel density needs x, y ≥ 0, got x={x}, y={y}"
            )));
        }
        Ok(besq_positive(nu, t, y, x))
    } else {
        if y > 0.0 || x < 0.0 {
            return Err(Error::Unsupported(format!(
                "negative-time squared Bessel density is real only for y ≤ 0 ≤ x, got x={x}, y={y}"
            )));
        }
        Ok(besq_negative(nu, -t, -y, x))
    }
}

fn check_pair(y: &Configuration, x: &Configuration) -> Result<()> {
    if y.len() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    if x.is_empty() {
        return Err(domain("configurations must be nonempty"));
    }
    for c in [x, y] {
        if !c.is_strict() {
            let sep = c
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            return Err(Error::Coincident { separation: sep });
        }
    }
    Ok(())
}

/// Karlin–McGregor determinant `f(t, y|x) = det[p(t, y_j|x_k)]`.
pub fn km_det_bm(t: f64, y: &Configuration, x: &Configuration) -> Result<f64> {
    if !(t > 0.0) {
        return if t == 0.0 {
            Err(Error::DeltaMeasure)
        } else {
            Err(domain("time must be positive"))
        };
    }
    check_pair(y, x)?;
    Ok(km_det_bm_unchecked(t, y, x))
}

/// Karlin–McGregor determinant without the distinctness check, for use
/// where coincident points are legitimate (they give zero).
pub(crate) fn km_det_bm_unchecked(t: f64, y: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    let mut m = Vec::with_capacity(n * n);
    for yj in y {
        for xk in x {
            m.push(gauss(t, *yj, *xk));
        }
    }
    det_in_place(&mut m, n)
}

/// Karlin–McGregor determinant `f^{(ν)}(t, y|x) = det[p^{(ν)}(t, y_j|x_k)]`.
pub fn km_det_besq(nu: f64, t: f64, y: &Configuration, x: &Configuration) -> Result<f64> {
    check_nu(nu)?;
    if !(t > 0.0) {
        return if t == 0.0 {
            Err(Error::DeltaMeasure)
        } else {
            Err(domain("time must be positive"))
        };
    }
    check_pair(y, x)?;
    if !x.is_nonnegative() || !y.is_nonnegative() {
        return Err(domain("squared Bessel configurations must be nonnegative"));
    }
    Ok(km_det_besq_unchecked(nu, t, y, x))
}

pub(crate) fn km_det_besq_unchecked(nu: f64, t: f64, y: &[f64], x: &[f64]) -> f64 {
    let n = x.len();
    let mut m = Vec::with_capacity(n * n);
    for yj in y {
        for xk in x {
            m.push(besq_positive(nu, t, *yj, *xk));
        }
    }
    det_in_place(&mut m, n)
}
