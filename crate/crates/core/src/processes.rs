//! Path simulation of noncolliding Brownian motion (Dyson's model) and the
//! noncolliding squared Bessel process, by Euler–Maruyama on the SDEs and by
//! the eigenvalues of matrix-valued Brownian motions.
//!
//! The Euler scheme cannot start from coinciding points. To simulate from
//! `Nδ_0`, take the matrix-method state at a small time `t_ε` and continue
//! with Euler steps ([`warm_start_paths`]).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::biorth::Family;
use crate::config::Configuration;
use crate::ensembles::{chiral_matrix, gue_matrix, hermitian_eigenvalues};
use crate::error::{domain, Error, Result};
use crate::rng::stream;
use crate::stats::mean_stderr;

/// Consecutive step halvings tolerated before an Euler step is abandoned.
pub const MAX_HALVINGS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Euler,
    Matrix,
}

/// States of one path at increasing output times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Configuration>,
    pub family: Family,
    pub method: Method,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.states.first().map_or(0, |s| s.len())
    }

    /// CSV rows `t,x_1,...,x_N`, floats with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for j in 1..=self.n() {
            out.push_str(&format!(",x_{j}"));
        }
        out.push('\n');
        for (t, s) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{t:.16e}"));
            for x in s.iter() {
                out.push_str(&format!(",{x:.16e}"));
            }
            out.push('\n');
        }
        out
    }
}

fn check_times(start: f64, times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(domain("no output times requested"));
    }
    let mut prev = start;
    for &t in times {
        if !(t > prev) || !t.is_finite() {
            return Err(domain(
                "output times must be finite and strictly increasing after the start",
            ));
        }
        prev = t;
    }
    Ok(())
}

fn drift_and_noise(family: Family, x: &[f64], j: usize) -> (f64, f64) {
    let xj = x[j];
    let pull: f64 = x
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &xk)| 1.0 / (xj - xk))
        .sum();
    match family {
        Family::Bm => (pull, 1.0),
        Family::Besq { nu } => (2.0 * (nu + 1.0) + 4.0 * xj * pull, 2.0 * xj.max(0.0).sqrt()),
    }
}

fn admissible(family: Family, x: &[f64]) -> bool {
    if x.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let ordered = x.windows(2).all(|w| w[0] < w[1]);
    match family {
        Family::Bm => ordered,
        Family::Besq { .. } => ordered && x[0] >= 0.0,
    }
}

/// One Euler–Maruyama step of size `h`, or `None` if it breaks the
/// ordering (or positivity).
fn euler_step(family: Family, x: &[f64], h: f64, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    let sh = h.sqrt();
    let mut next: Vec<f64> = (0..x.len())
        .map(|j| {
            let (drift, vol) = drift_and_noise(family, x, j);
            let z: f64 = rng.sample(StandardNormal);
            x[j] + drift * h + vol * sh * z
        })
        .collect();
    if let Family::Besq { nu } = family {
        if nu < 0.0 {
            for v in &mut next {
                *v = v.abs();
            }
            next.sort_by(f64::total_cmp);
        }
    }
    admissible(family, &next).then_some(next)
}

/// Advance `x` from `t` to `t_end` in steps of at most `dt`. A step that
/// breaks the ordering is redrawn at half the size, up to [`MAX_HALVINGS`]
/// times in a row.
fn advance(
    family: Family,
    x: &mut Vec<f64>,
    t: f64,
    t_end: f64,
    dt: f64,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let mut now = t;
    while now < t_end {
        let mut h = dt.min(t_end - now);
        let mut halvings = 0;
        loop {
            if let Some(next) = euler_step(family, x, h, rng) {
                *x = next;
                now += h;
                if t_end - now < 1e-15 * t_end.max(1.0) {
                    now = t_end;
                }
                break;
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::Ordering {
                    halvings: MAX_HALVINGS,
                    time: now,
                });
            }
            h *= 0.5;
        }
    }
    Ok(())
}

/// Euler–Maruyama path from `x0` at time `t0`, recorded at `times`.
///
/// BM: `dX_j = dB_j + Σ_{k≠j} dt/(X_j - X_k)`.
/// BESQ: `dX_j = 2√X_j dB_j + 2(ν+1) dt + 4X_j Σ_{k≠j} dt/(X_j - X_k)`,
/// reflected at the origin when `-1 < ν < 0`.
pub fn simulate_euler(
    family: Family,
    t0: f64,
    x0: &Configuration,
    times: &[f64],
    dt: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory> {
    if let Family::Besq { nu } = family {
        Family::besq(nu)?;
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(domain(format!("step size must be positive, got {dt}")));
    }
    if x0.is_empty() {
        return Err(domain("empty initial configuration"));
    }
    if !admissible(family, x0) {
        return Err(domain(
            "Euler start must be strictly ordered (and nonnegative for BESQ)",
        ));
    }
    check_times(t0, times)?;
    let mut x = x0.points().to_vec();
    let mut out_t = vec![t0];
    let mut states = vec![x0.clone()];
    let mut now = t0;
    for &t in times {
        advance(family, &mut x, now, t, dt, rng)?;
        now = t;
        out_t.push(t);
        states.push(Configuration::new(x.clone())?);
    }
    Ok(Trajectory {
        times: out_t,
        states,
        family,
        method: Method::Euler,
    })
}

fn matrix_nu(family: Family) -> Result<Option<usize>> {
    match family {
        Family::Bm => Ok(None),
        Family::Besq { nu } => {
            if nu >= 0.0 && nu.fract() == 0.0 && nu <= 64.0 {
                Ok(Some(nu as usize))
            } else {
                Err(Error::Unsupported(format!(
                    "matrix simulation of the squared Bessel process needs integer ν, got {nu}"
                )))
            }
        }
    }
}

/// Eigenvalue path of a matrix-valued Brownian motion started at the zero
/// matrix: Hermitian with the GUE normalisation at variance `t` (BM), or
/// `M†M` for a complex `(N+ν)×N` Brownian matrix with `E|M_jk(t)|² = 2t`
/// (BESQ, integer `ν`). The first state is `Nδ_0` at time 0.
pub fn simulate_matrix(
    family: Family,
    n: usize,
    times: &[f64],
    rng: &mut ChaCha8Rng,
) -> Result<Trajectory> {
    if n == 0 {
        return Err(domain("need at least one particle"));
    }
    let nu = matrix_nu(family)?;
    check_times(0.0, times)?;
    let mut out_t = vec![0.0];
    let mut states = vec![Configuration::new(vec![0.0; n])?];
    let mut now = 0.0;
    match nu {
        None => {
            let mut h = DMatrix::<Complex64>::zeros(n, n);
            for &t in times {
                h += gue_matrix(n, t - now, rng);
                now = t;
                out_t.push(t);
                states.push(hermitian_eigenvalues(h.clone()));
            }
        }
        Some(nu) => {
            let mut m = DMatrix::<Complex64>::zeros(n + nu, n);
            for &t in times {
                m += chiral_matrix(n, nu, t - now, rng);
                now = t;
                out_t.push(t);
                let w = m.adjoint() * &m;
                let mut ev = hermitian_eigenvalues(w).into_points();
                for v in &mut ev {
                    *v = v.max(0.0);
                }
                states.push(Configuration::new(ev)?);
            }
        }
    }
    Ok(Trajectory {
        times: out_t,
        states,
        family,
        method: Method::Matrix,
    })
}

/// `paths` independent matrix-method paths; path `i` uses stream `i` of
/// `seed`.
pub fn matrix_paths(
    family: Family,
    n: usize,
    times: &[f64],
    paths: usize,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    (0..paths as u64)
        .into_par_iter()
        .map(|i| simulate_matrix(family, n, times, &mut stream(seed, i)))
        .collect()
}

/// `paths` independent Euler paths from a fixed start.
pub fn euler_paths(
    family: Family,
    x0: &Configuration,
    times: &[f64],
    dt: f64,
    paths: usize,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    (0..paths as u64)
        .into_par_iter()
        .map(|i| simulate_euler(family, 0.0, x0, times, dt, &mut stream(seed, i)))
        .collect()
}

/// Euler paths from `Nδ_0`: the matrix method supplies the state at `t_eps`,
/// Euler steps take over from there. The returned trajectories start at
/// `t_eps`.
pub fn warm_start_paths(
    family: Family,
    n: usize,
    t_eps: f64,
    times: &[f64],
    dt: f64,
    paths: usize,
    seed: u64,
) -> Result<Vec<Trajectory>> {
    (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let start = simulate_matrix(family, n, &[t_eps], &mut rng)?;
            let x0 = start.states.into_iter().next_back().expect("one state");
            simulate_euler(family, t_eps, &x0, times, dt, &mut rng)
        })
        .collect()
}

/// Statistics across paths at one output time. Pairs are `(mean, stderr)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSummary {
    pub t: f64,
    pub position: Vec<(f64, f64)>,
    pub position_var: Vec<f64>,
    pub gap: Vec<(f64, f64)>,
    pub gap_var: Vec<f64>,
    pub gap_sq: Vec<(f64, f64)>,
}

fn sample_var(xs: &[f64]) -> f64 {
    let (_, se) = mean_stderr(xs);
    se * se * xs.len() as f64
}

/// Per-time means, variances and standard errors of positions and adjacent
/// gaps over a set of trajectories sharing their output times.
pub fn gap_statistics(trajs: &[Trajectory]) -> Result<Vec<TimeSummary>> {
    let first = trajs.first().ok_or_else(|| domain("no trajectories"))?;
    let n = first.n();
    if n < 2 {
        return Err(domain("gap statistics need at least two particles"));
    }
    if trajs
        .iter()
        .any(|tr| tr.times != first.times || tr.n() != n)
    {
        return Err(domain(
            "trajectories must share output times and particle number",
        ));
    }
    let mut out = Vec::with_capacity(first.times.len());
    for (k, &t) in first.times.iter().enumerate() {
        let column = |f: &dyn Fn(&Configuration) -> f64| -> Vec<f64> {
            trajs.iter().map(|tr| f(&tr.states[k])).collect()
        };
        let mut summary = TimeSummary {
            t,
            position: vec![],
            position_var: vec![],
            gap: vec![],
            gap_var: vec![],
            gap_sq: vec![],
        };
        for j in 0..n {
            let xs = column(&|s| s[j]);
            summary.position.push(mean_stderr(&xs));
            summary.position_var.push(sample_var(&xs));
        }
        for j in 0..n - 1 {
            let gs = column(&|s| s[j + 1] - s[j]);
            summary.gap.push(mean_stderr(&gs));
            summary.gap_var.push(sample_var(&gs));
            let sq: Vec<f64> = gs.iter().map(|g| g * g).collect();
            summary.gap_sq.push(mean_stderr(&sq));
        }
        out.push(summary);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_chgue_with, sample_gue_with};
    use crate::stats::{ks_critical_two_sample, ks_two_sample, z_score};

    fn cfg(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    #[test]
    fn single_bm_is_brownian() {
        let trajs = euler_paths(Family::Bm, &cfg(&[0.3]), &[1.0], 0.01, 10_000, 1).unwrap();
        let xs: Vec<f64> = trajs.iter().map(|t| t.states[1][0]).collect();
        let (m, se) = mean_stderr(&xs);
        assert!(z_score(m, 0.3, se).abs() < 3.0);
        let sq: Vec<f64> = xs.iter().map(|x| (x - 0.3) * (x - 0.3)).collect();
        let (v, se) = mean_stderr(&sq);
        assert!(z_score(v, 1.0, se).abs() < 3.0, "{v} ± {se}");
    }

    #[test]
    fn single_besq_mean_drift() {
        for &nu in &[0.0, -0.5, 1.0] {
            let trajs =
                euler_paths(Family::Besq { nu }, &cfg(&[0.5]), &[1.0], 1e-3, 10_000, 2).unwrap();
            let xs: Vec<f64> = trajs.iter().map(|t| t.states[1][0]).collect();
            assert!(xs.iter().all(|&x| x >= 0.0));
            let (m, se) = mean_stderr(&xs);
            assert!(
                z_score(m, 0.5 + 2.0 * (nu + 1.0), se).abs() < 3.0,
                "nu={nu}: {m} ± {se}"
            );
        }
    }

    #[test]
    fn euler_paths_stay_ordered() {
        let x0 = cfg(&[-0.1, 0.0, 0.2]);
        let times: Vec<f64> = (1..=20).map(|k| 0.05 * k as f64).collect();
        for tr in euler_paths(Family::Bm, &x0, &times, 1e-3, 50, 3).unwrap() {
            assert!(tr.states.iter().all(|s| s.is_strict()));
        }
        for &nu in &[-0.5, 0.0, 1.0, 2.0] {
            let x0 = cfg(&[0.01, 0.05, 0.3]);
            for tr in euler_paths(Family::Besq { nu }, &x0, &times, 1e-3, 50, 4).unwrap() {
                assert!(tr
                    .states
                    .iter()
                    .all(|s| s.is_nonnegative() && s.windows(2).all(|w| w[0] < w[1])));
            }
        }
    }

    #[test]
    fn euler_rejects_bad_input() {
        assert!(simulate_euler(
            Family::Bm,
            0.0,
            &cfg(&[0.0, 0.0]),
            &[1.0],
            0.1,
            &mut stream(0, 0)
        )
        .is_err());
        assert!(simulate_euler(
            Family::Bm,
            0.0,
            &cfg(&[0.0, 1.0]),
            &[1.0],
            0.0,
            &mut stream(0, 0)
        )
        .is_err());
        assert!(simulate_euler(
            Family::Bm,
            0.0,
            &cfg(&[0.0, 1.0]),
            &[0.5, 0.5],
            0.1,
            &mut stream(0, 0)
        )
        .is_err());
        let besq = Family::Besq { nu: 0.0 };
        assert!(simulate_euler(
            besq,
            0.0,
            &cfg(&[-0.1, 1.0]),
            &[1.0],
            0.1,
            &mut stream(0, 0)
        )
        .is_err());
    }

    #[test]
    fn matrix_method_examples() {
        let tr = simulate_matrix(Family::Bm, 3, &[0.1, 0.5, 1.0], &mut stream(5, 0)).unwrap();
        assert_eq!(tr.times, vec![0.0, 0.1, 0.5, 1.0]);
        assert_eq!(tr.states[0].points(), &[0.0, 0.0, 0.0]);
        assert!(tr.states[1..].iter().all(|s| s.is_strict()));
        assert!(matches!(
            simulate_matrix(Family::Besq { nu: 0.5 }, 2, &[1.0], &mut stream(0, 0)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn matrix_marginals_match_ensembles() {
        let paths = 10_000;
        let trajs = matrix_paths(Family::Bm, 2, &[0.3, 0.7], paths, 6).unwrap();
        let direct: Vec<Vec<f64>> = (0..paths as u64)
            .map(|i| sample_gue_with(2, 0.7, &mut stream(60, i)).into_points())
            .collect();
        let crit = ks_critical_two_sample(paths, paths, 0.05);
        for j in 0..2 {
            let a: Vec<f64> = trajs.iter().map(|t| t.states[2][j]).collect();
            let b: Vec<f64> = direct.iter().map(|d| d[j]).collect();
            assert!(ks_two_sample(&a, &b) < crit);
        }
        let trajs = matrix_paths(Family::Besq { nu: 1.0 }, 2, &[0.4, 0.9], paths, 7).unwrap();
        let direct: Vec<Vec<f64>> = (0..paths as u64)
            .map(|i| sample_chgue_with(2, 1.0, 0.9, &mut stream(70, i)).into_points())
            .collect();
        for j in 0..2 {
            let a: Vec<f64> = trajs.iter().map(|t| t.states[2][j]).collect();
            let b: Vec<f64> = direct.iter().map(|d| d[j]).collect();
            assert!(ks_two_sample(&a, &b) < crit);
        }
    }

    #[test]
    fn dyson_gap_second_moment() {
        let times = [0.2, 0.5, 1.0];
        let stats =
            gap_statistics(&matrix_paths(Family::Bm, 2, &times, 10_000, 8).unwrap()).unwrap();
        for s in &stats[1..] {
            let (m, se) = s.gap_sq[0];
            assert!(
                z_score(m, 6.0 * s.t, se).abs() < 3.0,
                "t={}: {m} ± {se}",
                s.t
            );
        }
    }

    #[test]
    fn gap_statistics_of_fixed_paths() {
        let make = |a: f64, b: f64| Trajectory {
            times: vec![0.0, 1.0],
            states: vec![cfg(&[0.0, 1.0]), cfg(&[a, b])],
            family: Family::Bm,
            method: Method::Euler,
        };
        let s = gap_statistics(&[make(0.0, 2.0), make(1.0, 5.0)]).unwrap();
        assert_eq!(s[0].gap[0].0, 1.0);
        assert_eq!(s[0].gap_var[0], 0.0);
        assert_eq!(s[1].gap[0].0, 3.0);
        assert_eq!(s[1].gap_sq[0].0, 10.0);
        assert_eq!(s[1].position[1].0, 3.5);
        assert_eq!(s[1].gap_var[0], 2.0);
        let lone = Trajectory {
            times: vec![0.0],
            states: vec![cfg(&[0.0])],
            family: Family::Bm,
            method: Method::Matrix,
        };
        assert!(gap_statistics(&[lone]).is_err());
    }

    #[test]
    fn methods_agree_on_gaps_and_marginals() {
        let times = [0.2, 0.5, 1.0];
        let paths = 4_000;
        let euler = warm_start_paths(Family::Bm, 2, 0.01, &times, 1e-3, paths, 9).unwrap();
        let matrix = matrix_paths(Family::Bm, 2, &[0.01, 0.2, 0.5, 1.0], paths, 10).unwrap();
        let se = gap_statistics(&euler).unwrap();
        let sm = gap_statistics(&matrix).unwrap();
        for (a, b) in se[1..].iter().zip(&sm[2..]) {
            assert_eq!(a.t, b.t);
            let ((ma, ea), (mb, eb)) = (a.gap_sq[0], b.gap_sq[0]);
            assert!(
                (ma - mb).abs() < 3.0 * ea.hypot(eb),
                "t={}: {ma} vs {mb}",
                a.t
            );
        }
        let crit = ks_critical_two_sample(paths, paths, 0.05);
        for j in 0..2 {
            let a: Vec<f64> = euler.iter().map(|t| t.states[3][j]).collect();
            let b: Vec<f64> = matrix.iter().map(|t| t.states[4][j]).collect();
            assert!(ks_two_sample(&a, &b) < crit);
        }
    }

    #[test]
    fn csv_layout() {
        let tr = Trajectory {
            times: vec![0.0, 0.5],
            states: vec![cfg(&[0.0, 1.0]), cfg(&[-0.25, 1.5])],
            family: Family::Bm,
            method: Method::Euler,
        };
        let csv = tr.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,x_1,x_2");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("5.0000000000000000e-1,-2.5000000000000000e-1"));
    }
}
