//! Gauss–Legendre quadrature on finite and truncated infinite domains.
//!
//! Every integrand in this crate decays like a Gaussian or an exponential,
//! so infinite domains are truncated where the integrand drops below
//! [`TAIL_REL`] of its observed peak and the remaining interval is integrated
//! by adaptive bisection of a fixed Gauss–Legendre rule.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Integrand magnitude, relative to its peak, at which tails are cut.
pub const TAIL_REL: f64 = 1e-14;

const RULE_ORDER: usize = 20;
const MAX_DEPTH: u32 = 40;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi's initial guess followed by Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Golub–Welsch: nodes and weights from the symmetric Jacobi matrix of a
/// weight with total mass `mass`.
fn golub_welsch(diag: &[f64], off: &[f64], mass: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = nalgebra::DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        j[(k, k)] = diag[k];
        if k + 1 < n {
            j[(k, k + 1)] = off[k];
            j[(k + 1, k)] = off[k];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mass * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `n`-point Gauss rule for the weight `e^{-x²/2σ²}` on the real line.
pub fn gauss_hermite(n: usize, sigma2: f64) -> (Vec<f64>, Vec<f64>) {
    let off: Vec<f64> = (1..n).map(|k| (k as f64 * sigma2).sqrt()).collect();
    golub_welsch(
        &vec![0.0; n],
        &off,
        (2.0 * std::f64::consts::PI * sigma2).sqrt(),
    )
}

/// `n`-point Gauss rule for the weight `x^ν e^{-x/s}` on `[0, ∞)`.
pub fn gauss_laguerre(n: usize, nu: f64, s: f64) -> (Vec<f64>, Vec<f64>) {
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + nu + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|k| (k as f64 * (k as f64 + nu)).sqrt())
        .collect();
    let mass = statrs::function::gamma::gamma(nu + 1.0);
    let (x, w) = golub_welsch(&diag, &off, mass);
    let scale = s.powf(nu + 1.0);
    (
        x.into_iter().map(|v| v * s).collect(),
        w.into_iter().map(|v| v * scale).collect(),
    )
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(RULE_ORDER))
}

/// Fixed-order Gauss–Legendre estimate on `[a, b]`.
pub fn fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Adaptive Gauss–Legendre integration of `f` over `[a, b]`.
///
/// A subinterval is accepted when the rule on it and on its two halves agree
/// to its share of `tol` times the magnitude of the integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = fixed(&f, a, b);
    let mut scale = whole.abs();
    // A rough absolute scale from a few panels guards against an accidental
    // near-zero first estimate.
    let panels = 8;
    let h = (b - a) / panels as f64;
    let mut rough = 0.0;
    for i in 0..panels {
        let lo = a + h * i as f64;
        rough += fixed(&f, lo, lo + h).abs();
    }
    scale = scale.max(rough);
    let abs_tol = (tol * scale).max(1e-300);
    let mut total = 0.0;
    let mut stack = vec![(a, b, whole, 0u32)];
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = fixed(&f, lo, mid);
        let right = fixed(&f, mid, hi);
        let refined = left + right;
        let width_share = (hi - lo) / (b - a);
        let diff = (refined - est).abs();
        if diff <= abs_tol * width_share.max(1e-6) || diff < 1e-15 * scale {
            total += refined;
        } else if depth >= MAX_DEPTH {
            return Err(Error::Quadrature(format!(
                "no convergence on [{lo}, {hi}] after {MAX_DEPTH} bisections"
            )));
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    if !total.is_finite() {
        return Err(Error::Quadrature("non-finite integral".into()));
    }
    Ok(total)
}

/// Locate where `|f|` falls below [`TAIL_REL`] of the peak seen while
/// walking from `start` in steps of `step` (negative `step` walks left).
fn tail_end<F: Fn(f64) -> f64>(f: &F, start: f64, step: f64, peak: &mut f64, limit: f64) -> f64 {
    let mut x = start;
    let mut quiet = 0;
    let mut steps = 0;
    loop {
        let v = f(x).abs();
        if v.is_finite() && v > *peak {
            *peak = v;
        }
        if v <= TAIL_REL * *peak {
            quiet += 1;
            if quiet >= 3 {
                return x;
            }
        } else {
            quiet = 0;
        }
        steps += 1;
        let next = x + step;
        if (step > 0.0 && next > limit) || (step < 0.0 && next < limit) {
            return limit;
        }
        if steps > 100_000 {
            return x;
        }
        x = next;
    }
}

/// Integrate over the whole real line. `center` should lie near the bulk
/// of the integrand and `step` be comparable to its width.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    step: f64,
    tol: f64,
) -> Result<f64> {
    let mut peak = f(center).abs();
    let hi = tail_end(&f, center, step, &mut peak, f64::MAX);
    let lo = tail_end(&f, center, -step, &mut peak, f64::MIN);
    integrate_split(&f, lo, hi, center, tol)
}

/// Integrate over `[lower, ∞)`.
///
/// The substitution `x = lower + u²` removes integrable `(x - lower)^{-1/2}`
/// endpoint singularities, which the squared-Bessel densities with
/// `ν = -1/2` produce.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    center: f64,
    step: f64,
    tol: f64,
) -> Result<f64> {
    let center = center.max(lower + step * 1e-3);
    let mut peak = f(center).abs();
    let hi = tail_end(&f, center, step, &mut peak, f64::MAX);
    let lo = tail_end(&f, center, -step, &mut peak, lower).max(lower);
    let g = |u: f64| 2.0 * u * f(lower + u * u);
    let (ulo, uc, uhi) = (
        (lo - lower).sqrt(),
        (center - lower).sqrt(),
        (hi - lower).sqrt(),
    );
    integrate_split(&g, ulo, uhi, uc, tol)
}

fn integrate_split<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    center: f64,
    tol: f64,
) -> Result<f64> {
    if lo < center && center < hi {
        Ok(integrate(f, lo, center, tol)? + integrate(f, center, hi, tol)?)
    } else {
        integrate(f, lo, hi, tol)
    }
}
