//! A battery of exact identities, each evaluated on seeded random inputs
//! and reported as the largest discrepancy seen against its tolerance.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::biorth::{
    ext_hermite_kernel, ext_laguerre_kernel, h_minus_det, h_plus_det, phi_minus, phi_minus_origin,
    phi_nu_minus, phi_nu_minus_origin, phi_nu_minus_quadrature, phi_nu_plus, phi_nu_plus_origin,
    phi_nu_plus_residue, phi_plus, phi_plus_origin, phi_plus_residue, Family,
};
use crate::charpoly::{
    m_class_both, m_gue_monic_form, m_gue_pair_form, m_nu_monic_form, m_nu_pair_form, AlphaGrid,
    ClassKind,
};
use crate::config::InitialConfig;
use crate::densities::{besq_positive, gauss, km_det_besq_unchecked, km_det_bm_unchecked};
use crate::detkit::{ishikawa_both_sides, ishikawa_general_both_sides, vandermonde_product};
use crate::error::Result;
use crate::quad::{integrate_half_line, integrate_real_line};
use crate::rng::stream;
use crate::specfun::{hermite, laguerre, log_factorial};
use crate::{rel_err, rel_err_f64};

/// Outcome of one identity over all its cases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub max_err: f64,
    pub tol: f64,
    pub pass: bool,
}

struct Tally {
    name: &'static str,
    tol: f64,
    cases: usize,
    max_err: f64,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            tol,
            cases: 0,
            max_err: 0.0,
        }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        // NaN must fail the check.
        if !(err <= self.max_err) {
            self.max_err = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            cases: self.cases,
            pass: self.cases > 0 && self.max_err <= self.tol,
            max_err: self.max_err,
            tol: self.tol,
        }
    }
}

/// Mixed error: relative for large values, absolute near zero.
fn mixed(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn separated(rng: &mut ChaCha8Rng, m: usize, sep: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    while out.len() < m {
        let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0));
        if out.iter().all(|w| (w - z).norm() >= sep) {
            out.push(z);
        }
    }
    out
}

fn separated_real(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64, sep: f64) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..m).map(|_| rng.random_range(lo..hi)).collect();
        v.sort_by(f64::total_cmp);
        if v.windows(2).all(|w| w[1] - w[0] >= sep) {
            return v;
        }
    }
}

/// Chiral indices exercised by the Laguerre checks.
pub const NU_VALUES: [f64; 5] = [-0.5, 0.0, 0.5, 1.0, 2.3];

/// The GUE determinant formula in its pair form and in its monic form,
/// 100 random `α` for each `N ≤ 6`, `n ≤ 3`.
pub fn gue_forms(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 1);
    let mut tally = Tally::new("gue_pair_vs_monic", 1e-9);
    for n_mat in 1..=6 {
        for n in 1..=3 {
            for _ in 0..100 {
                let alpha = AlphaGrid::new(separated(&mut rng, 2 * n, 0.3))?;
                let s2 = rng.random_range(0.3..2.0);
                tally.record(rel_err(
                    m_gue_pair_form(&alpha, n_mat, s2)?,
                    m_gue_monic_form(&alpha, n_mat, s2)?,
                ));
            }
        }
    }
    Ok(tally.finish())
}

/// The chiral determinant formula in its pair and monic forms.
pub fn laguerre_forms(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 2);
    let mut tally = Tally::new("laguerre_pair_vs_monic", 1e-9);
    for &nu in &NU_VALUES {
        for n_mat in 1..=6 {
            for n in 1..=3 {
                for _ in 0..20 {
                    let alpha = AlphaGrid::new(separated(&mut rng, 2 * n, 0.3))?;
                    let s2 = rng.random_range(0.3..2.0);
                    let pair = m_nu_pair_form(&alpha, n_mat, nu, s2)?;
                    tally.record(rel_err(pair, m_nu_monic_form(&alpha, n_mat, nu, s2)?));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Class C and D: the Laguerre-at-`α²` expression against the Hermite one.
pub fn class_forms(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 3);
    let mut tally = Tally::new("class_c_d_forms", 1e-9);
    for kind in [ClassKind::C, ClassKind::D] {
        for n_mat in 1..=5 {
            for n in 1..=3 {
                for _ in 0..20 {
                    let alpha = AlphaGrid::new(separated(&mut rng, 2 * n, 0.3))?;
                    let s2 = rng.random_range(0.3..2.0);
                    let (lag, her) = m_class_both(kind, &alpha, n_mat, s2)?;
                    tally.record(rel_err(lag, her));
                }
            }
        }
    }
    Ok(tally.finish())
}

/// `x L_n^{1/2}(x²/2) ∝ H_{2n+1}(x/√2)` and `L_n^{-1/2}(x²/2) ∝ H_{2n}(x/√2)`
/// for `n ≤ 10`.
pub fn half_index_bridges() -> Result<Check> {
    let mut tally = Tally::new("hermite_laguerre_bridges", 1e-10);
    for n in 0..=10 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..=40 {
            let x = -4.0 + 0.2 * i as f64;
            let z = Complex64::new(x * x / 2.0, 0.0);
            let arg = Complex64::new(x / std::f64::consts::SQRT_2, 0.0);
            let lhs = x * laguerre(n, 0.5, z)?.re;
            let rhs = sign
                * (-(2.0 * nf + 0.5) * std::f64::consts::LN_2 - log_factorial(n)).exp()
                * hermite(2 * n + 1, arg).re;
            tally.record(mixed(lhs, rhs));
            let lhs = laguerre(n, -0.5, z)?.re;
            let rhs = sign
                * (-(2.0 * nf) * std::f64::consts::LN_2 - log_factorial(n)).exp()
                * hermite(2 * n, arg).re;
            tally.record(mixed(lhs, rhs));
        }
    }
    Ok(tally.finish())
}

/// The Ishikawa determinant identity, 200 random draws for each `n ≤ 4`,
/// and its generalized-Vandermonde extension for small `(p, q)`.
pub fn ishikawa(seed: u64) -> Result<Vec<Check>> {
    let mut rng = stream(seed, 4);
    let mut basic = Tally::new("ishikawa", 1e-9);
    for n in 1..=4 {
        for _ in 0..200 {
            let pts = separated(&mut rng, 2 * n, 0.3);
            let (x, y) = pts.split_at(n);
            let coef = separated(&mut rng, 2 * n, 0.0);
            let (a, b) = coef.split_at(n);
            let (l, r) = ishikawa_both_sides(x, y, a, b)?;
            basic.record(rel_err(l, r));
        }
    }
    let mut general = Tally::new("ishikawa_general", 1e-8);
    for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 1), (2, 2)] {
        for n in 1..=3 {
            for _ in 0..20 {
                let pts = separated(&mut rng, 2 * n + p + q, 0.3);
                let coef = separated(&mut rng, 2 * n + p + q, 0.0);
                let (x, rest) = pts.split_at(n);
                let (y, z) = rest.split_at(n);
                let (a, rest) = coef.split_at(n);
                let (b, c) = rest.split_at(n);
                let (l, r) = ishikawa_general_both_sides(p, q, x, y, a, b, z, c)?;
                general.record(rel_err(l, r));
            }
        }
    }
    Ok(vec![basic.finish(), general.finish()])
}

/// `h_n(α_{1..n}) h_n(α_{n+1..2n}) Π_{j,k}(α_{n+k} - α_j) = h_{2n}(α)`.
pub fn vandermonde_split(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 5);
    let mut tally = Tally::new("vandermonde_split", 1e-10);
    for n in 1..=4 {
        for _ in 0..200 {
            let alpha = separated(&mut rng, 2 * n, 0.05);
            let (lo, hi) = alpha.split_at(n);
            let mut cross = Complex64::new(1.0, 0.0);
            for h in hi {
                for l in lo {
                    cross *= h - l;
                }
            }
            let lhs = vandermonde_product(lo, n)? * vandermonde_product(hi, n)? * cross;
            tally.record(rel_err(lhs, vandermonde_product(&alpha, 2 * n)?));
        }
    }
    Ok(tally.finish())
}

/// Chapman–Kolmogorov by quadrature for both transition densities.
pub fn chapman_kolmogorov() -> Result<Vec<Check>> {
    let mut bm = Tally::new("chapman_kolmogorov_bm", 1e-8);
    let mut besq = Tally::new("chapman_kolmogorov_besq", 1e-6);
    for &s in &[0.3, 1.0, 2.0] {
        for &t in &[0.3, 1.0, 2.0] {
            for &(z, x) in &[(0.0, 0.0), (-3.0, 2.0), (2.5, -1.0)] {
                let lhs = integrate_real_line(
                    |y| gauss(s, z, y) * gauss(t, y, x),
                    0.5 * (z + x),
                    1.0,
                    1e-13,
                )?;
                bm.record(rel_err_f64(lhs, gauss(s + t, z, x)));
            }
            for &nu in &NU_VALUES {
                for &(z, x) in &[(0.5, 0.0), (1.0, 4.0), (4.0, 2.5)] {
                    let lhs = integrate_half_line(
                        |y| besq_positive(nu, s, z, y) * besq_positive(nu, t, y, x),
                        0.0,
                        1.0 + 0.5 * (z + x),
                        1.0,
                        1e-12,
                    )?;
                    besq.record(rel_err_f64(lhs, besq_positive(nu, s + t, z, x)));
                }
            }
        }
    }
    Ok(vec![bm.finish(), besq.finish()])
}

/// Trace and reproducing property of the extended kernels.
pub fn extended_kernels() -> Result<Check> {
    let mut tally = Tally::new("extended_kernel_projection", 1e-6);
    let big_t = 0.9;
    for n in 1..=5 {
        let tr = integrate_real_line(
            |x| ext_hermite_kernel(n, big_t, x, x).unwrap_or(f64::NAN),
            0.0,
            1.0,
            1e-12,
        )?;
        tally.record((tr - n as f64).abs());
        for &(x, y) in &[(0.3, -1.1), (1.5, 0.2)] {
            let rep = integrate_real_line(
                |u| {
                    ext_hermite_kernel(n, big_t, x, u).unwrap_or(f64::NAN)
                        * ext_hermite_kernel(n, big_t, u, y).unwrap_or(f64::NAN)
                },
                0.0,
                1.0,
                1e-12,
            )?;
            tally.record((rep - ext_hermite_kernel(n, big_t, x, y)?).abs());
        }
        for &nu in &NU_VALUES {
            let k = |x: f64, y: f64| ext_laguerre_kernel(n, nu, big_t, x, y).unwrap_or(f64::NAN);
            let tr = integrate_half_line(|x| k(x, x), 0.0, 2.0, 1.0, 1e-12)?;
            tally.record((tr - n as f64).abs());
            for &(x, y) in &[(0.7, 2.2), (3.0, 0.4)] {
                let rep = integrate_half_line(|u| k(x, u) * k(u, y), 0.0, 2.0, 1.0, 1e-12)?;
                tally.record((rep - k(x, y)).abs());
            }
        }
    }
    Ok(tally.finish())
}

fn initial_configs() -> Vec<InitialConfig> {
    let pts: [&[f64]; 4] = [
        &[-1.0, 0.3, 1.1, 2.0],
        &[-0.4, 0.5, 0.8],
        &[0.7, 1.0],
        &[0.4],
    ];
    let mut out: Vec<InitialConfig> = pts
        .iter()
        .map(|p| InitialConfig::from_points(p.to_vec()).expect("valid"))
        .collect();
    out.extend((1..=4).map(InitialConfig::origin));
    out
}

fn nonnegative(xi: &InitialConfig) -> InitialConfig {
    let shift = xi.atoms().iter().copied().fold(0.0f64, f64::min);
    InitialConfig::from_points(xi.atoms().iter().map(|a| a - shift).collect()).expect("valid")
}

/// `∫ φ^{(+)}_m φ^{(-)}_n = δ_{mn}` by quadrature, both families, `N ≤ 4`.
pub fn biorthogonality() -> Result<Check> {
    let mut tally = Tally::new("biorthogonality", 1e-7);
    let t = 0.8;
    for xi in initial_configs() {
        let xp = nonnegative(&xi);
        for m in 0..xi.len() {
            for n in 0..xi.len() {
                let delta = if m == n { 1.0 } else { 0.0 };
                let f = |u: f64| {
                    let plus = phi_plus(m, t, u, &xi).unwrap_or(f64::NAN);
                    let minus = if xi.is_origin() {
                        phi_minus_origin(n, t, u)
                    } else {
                        phi_minus(n, t, u, &xi)
                    };
                    plus * minus.unwrap_or(f64::NAN)
                };
                tally.record((integrate_real_line(f, 0.5, 1.0, 1e-12)? - delta).abs());
                for &nu in &[-0.5, 0.0, 1.0] {
                    let g = |u: f64| {
                        phi_nu_plus(m, nu, t, u, &xp).unwrap_or(f64::NAN)
                            * phi_nu_minus(n, nu, t, u, &xp).unwrap_or(f64::NAN)
                    };
                    tally.record((integrate_half_line(g, 0.0, 2.0, 1.0, 1e-12)? - delta).abs());
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Closed forms of `φ^{(±)}` and `φ^{(ν,±)}` at `Nδ_0` against the residue,
/// moment and quadrature evaluations.
pub fn phi_closed_forms() -> Result<Check> {
    let mut tally = Tally::new("phi_closed_forms", 1e-8);
    for big_n in 1..=5 {
        let o = InitialConfig::origin(big_n);
        for n in 0..big_n {
            for &t in &[0.4, 1.1] {
                for &x in &[-1.5, -0.2, 0.0, 0.9, 2.4] {
                    tally.record(mixed(
                        phi_plus_origin(n, t, x)?,
                        phi_plus_residue(n, t, x, &o)?,
                    ));
                    tally.record(mixed(phi_minus_origin(n, t, x)?, phi_minus(n, t, x, &o)?));
                }
                for &nu in &NU_VALUES {
                    for &x in &[0.0, 0.3, 1.2, 2.5] {
                        // φ^{(ν,+)} carries x^ν and blows up at 0 for ν < 0.
                        if x == 0.0 && nu < 0.0 {
                            continue;
                        }
                        let closed = phi_nu_plus_origin(n, nu, t, x)?;
                        tally.record(mixed(closed, phi_nu_plus_residue(n, nu, t, x, &o)?));
                        let closed = phi_nu_minus_origin(n, nu, t, x)?;
                        tally.record(mixed(closed, phi_nu_minus(n, nu, t, x, &o)?));
                        if big_n <= 3 && x <= 1.2 {
                            tally.record(mixed(closed, phi_nu_minus_quadrature(n, nu, t, x, &o)?));
                        }
                    }
                }
            }
        }
    }
    Ok(tally.finish())
}

/// `f(t, y|x)/h_N(x) = h^{(+)}_N(t, y; ξ)` at distinct points, both
/// families.
pub fn karlin_mcgregor_distinct(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 6);
    let mut tally = Tally::new("karlin_mcgregor_distinct", 1e-8);
    for n in 1..=4 {
        for _ in 0..25 {
            let t = rng.random_range(0.3..1.5);
            let x = separated_real(&mut rng, n, -2.0, 2.0, 0.2);
            let y = separated_real(&mut rng, n, -2.0, 2.0, 0.2);
            let lhs = km_det_bm_unchecked(t, &y, &x) / vandermonde_product(&x, n)?;
            let rhs = h_plus_det(Family::Bm, t, &y, &InitialConfig::from_points(x)?)?;
            tally.record(rel_err_f64(lhs, rhs));
            let nu = NU_VALUES[rng.random_range(0..NU_VALUES.len())];
            let x = separated_real(&mut rng, n, 0.0, 3.0, 0.2);
            let y = separated_real(&mut rng, n, 0.0, 3.0, 0.2);
            let lhs = km_det_besq_unchecked(nu, t, &y, &x) / vandermonde_product(&x, n)?;
            let rhs = h_plus_det(Family::Besq { nu }, t, &y, &InitialConfig::from_points(x)?)?;
            tally.record(rel_err_f64(lhs, rhs));
        }
    }
    Ok(tally.finish())
}

/// The same identity when `x` has one double point: the left side is taken
/// as a limit along a symmetric split with Richardson extrapolation, the
/// right side uses the double-pole residues.
pub fn karlin_mcgregor_double(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 7);
    let mut tally = Tally::new("karlin_mcgregor_double_point", 1e-6);
    for n in 2..=4 {
        for _ in 0..10 {
            let t = rng.random_range(0.4..1.2);
            for family in [Family::Bm, Family::Besq { nu: 0.5 }] {
                let (lo, hi) = match family {
                    Family::Bm => (-2.0, 2.0),
                    Family::Besq { .. } => (0.2, 3.0),
                };
                let base = separated_real(&mut rng, n - 1, lo, hi, 0.3);
                let y = separated_real(&mut rng, n, lo, hi, 0.2);
                let split = |e: f64| -> Vec<f64> {
                    let mut x = vec![base[0] - e, base[0] + e];
                    x.extend_from_slice(&base[1..]);
                    x.sort_by(f64::total_cmp);
                    x
                };
                let quotient = |e: f64| -> Result<f64> {
                    let x = split(e);
                    let km = match family {
                        Family::Bm => km_det_bm_unchecked(t, &y, &x),
                        Family::Besq { nu } => km_det_besq_unchecked(nu, t, &y, &x),
                    };
                    Ok(km / vandermonde_product(&x, n)?)
                };
                let e = 1e-3;
                let lhs = (4.0 * quotient(e / 2.0)? - quotient(e)?) / 3.0;
                let rhs = h_plus_det(family, t, &y, &InitialConfig::from_points(split(0.0))?)?;
                tally.record(rel_err_f64(lhs, rhs));
            }
        }
    }
    Ok(tally.finish())
}

/// `h^{(-)}_N` equals the Vandermonde product of its argument.
pub fn h_minus_vandermonde(seed: u64) -> Result<Check> {
    let mut rng = stream(seed, 8);
    let mut tally = Tally::new("h_minus_vandermonde", 1e-10);
    for n in 1..=4 {
        for _ in 0..20 {
            let y = separated_real(&mut rng, n, 0.0, 3.0, 0.1);
            let xi = InitialConfig::from_points(separated_real(&mut rng, n, 0.0, 3.0, 0.1))?;
            let v = h_minus_det(&y)?;
            tally.record(rel_err_f64(
                crate::biorth::h_minus_det_phi(Family::Bm, 0.7, &y, &xi)?,
                v,
            ));
            let fam = Family::Besq { nu: 0.5 };
            tally.record(rel_err_f64(
                crate::biorth::h_minus_det_phi(fam, 0.7, &y, &xi)?,
                v,
            ));
        }
    }
    Ok(tally.finish())
}

/// Every check in the battery.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    let mut out = vec![
        gue_forms(seed)?,
        laguerre_forms(seed)?,
        class_forms(seed)?,
        half_index_bridges()?,
    ];
    out.extend(ishikawa(seed)?);
    out.push(vandermonde_split(seed)?);
    out.extend(chapman_kolmogorov()?);
    out.push(extended_kernels()?);
    out.push(biorthogonality()?);
    out.push(phi_closed_forms()?);
    out.push(karlin_mcgregor_distinct(seed)?);
    out.push(karlin_mcgregor_double(seed)?);
    out.push(h_minus_vandermonde(seed)?);
    Ok(out)
}
