//! Monte Carlo verification of the time-shift equivalence: the process
//! started from a random configuration distributed as the GUE (chiral GUE)
//! eigenvalues with variance `σ²` has, at times `t`, the same multitime
//! correlation functions and densities as the process started from `Nδ_0`
//! at times `t + σ²`.
//!
//! Each check averages a quantity built from the kernel `K^ξ` over sampled
//! initial configurations `ξ` and compares it with the closed form from the
//! origin. All grid points share the same draws.

use serde::Serialize;

use crate::biorth::{corr_fn, multitime_pdf, Family, TimeBlock};
use crate::config::{Configuration, InitialConfig};
use crate::ensembles::{mc_expectation_vec, EnsembleSpec};
use crate::error::{domain, Result};
use crate::stats::z_score;

/// Parameters shared by every verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Setup {
    pub family: Family,
    pub n: usize,
    pub sigma2: f64,
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Setup {
    /// Law of the initial configuration.
    pub fn initial_law(&self) -> Result<EnsembleSpec> {
        match self.family {
            Family::Bm => EnsembleSpec::gue(self.n, self.sigma2),
            Family::Besq { nu } => EnsembleSpec::chgue(self.n, nu, self.sigma2),
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(domain(format!("time must be positive, got {}", self.t)));
        }
        self.initial_law().map(|_| ())
    }

    fn shifted(&self, t: f64) -> f64 {
        t + self.sigma2
    }
}

/// A verification report; `grid[i]` lists the coordinates of point `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub op: &'static str,
    pub params: Setup,
    pub grid: Vec<Vec<f64>>,
    pub estimates: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub stderr: Vec<f64>,
    pub z: Vec<f64>,
    pub pass: bool,
}

/// Acceptance rule: every `|z| ≤ 3`, and at most `⌈5%⌉` of the points
/// with `|z| > 2`.
pub fn accept(z: &[f64]) -> bool {
    let over_two = z.iter().filter(|v| !(v.abs() <= 2.0)).count();
    let allowed = (0.05 * z.len() as f64).ceil() as usize;
    z.iter().all(|v| v.abs() <= 3.0) && over_two <= allowed
}

fn run<F>(
    op: &'static str,
    setup: &Setup,
    grid: Vec<Vec<f64>>,
    closed_form: Vec<f64>,
    f: F,
) -> Result<Report>
where
    F: Fn(&InitialConfig, &[f64]) -> Result<f64> + Sync,
{
    setup.check()?;
    let law = setup.initial_law()?;
    let stats = mc_expectation_vec(&law, setup.samples, setup.seed, |x| {
        let xi = InitialConfig::new(x.clone())?;
        grid.iter().map(|g| f(&xi, g)).collect()
    })?;
    let estimates: Vec<f64> = stats.iter().map(|s| s.0).collect();
    let stderr: Vec<f64> = stats.iter().map(|s| s.1).collect();
    let z: Vec<f64> = estimates
        .iter()
        .zip(&closed_form)
        .zip(&stderr)
        .map(|((e, c), s)| z_score(*e, *c, *s))
        .collect();
    Ok(Report {
        op,
        params: *setup,
        pass: accept(&z),
        grid,
        estimates,
        closed_form,
        stderr,
        z,
    })
}

fn single_block(t: f64, points: Vec<f64>) -> Vec<TimeBlock> {
    vec![TimeBlock { t, points }]
}

/// `E[K^Ξ(t, x; t, x)]` against `K^{Nδ_0}(t+σ², x; t+σ², x)` at each `x`.
pub fn verify_onepoint(setup: &Setup, xs: &[f64]) -> Result<Report> {
    setup.check()?;
    let origin = InitialConfig::origin(setup.n);
    let big_t = setup.shifted(setup.t);
    let closed = xs
        .iter()
        .map(|&x| corr_fn(setup.family, &single_block(big_t, vec![x]), &origin))
        .collect::<Result<Vec<_>>>()?;
    let grid = xs.iter().map(|&x| vec![x]).collect();
    run("onepoint", setup, grid, closed, |xi, g| {
        corr_fn(setup.family, &single_block(setup.t, g.to_vec()), xi)
    })
}

/// `E[det_{j,k ≤ L} K^Ξ(t, x_j; t, x_k)]` against the determinant of the
/// origin kernel at `t + σ²`, for each tuple of distinct points.
pub fn verify_det_block(setup: &Setup, tuples: &[Vec<f64>]) -> Result<Report> {
    setup.check()?;
    for tuple in tuples {
        if tuple.is_empty() || tuple.len() > setup.n {
            return Err(domain(format!(
                "block size must be between 1 and N = {}",
                setup.n
            )));
        }
        let mut s = tuple.clone();
        s.sort_by(f64::total_cmp);
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain("block points must be distinct"));
        }
    }
    let origin = InitialConfig::origin(setup.n);
    let big_t = setup.shifted(setup.t);
    let closed = tuples
        .iter()
        .map(|tuple| corr_fn(setup.family, &single_block(big_t, tuple.clone()), &origin))
        .collect::<Result<Vec<_>>>()?;
    run("det_block", setup, tuples.to_vec(), closed, |xi, g| {
        corr_fn(setup.family, &single_block(setup.t, g.to_vec()), xi)
    })
}

/// `E[p^Ξ(t, y)]` (the one-time density of the process from `Ξ`) against
/// the density from `Nδ_0` at `t + σ²`, which is also checked against the
/// ensemble density at variance `t + σ²`.
pub fn verify_density_shift(setup: &Setup, configs: &[Configuration]) -> Result<Report> {
    setup.check()?;
    let origin = InitialConfig::origin(setup.n);
    let big_t = setup.shifted(setup.t);
    let shifted_law = match setup.family {
        Family::Bm => EnsembleSpec::gue(setup.n, big_t)?,
        Family::Besq { nu } => EnsembleSpec::chgue(setup.n, nu, big_t)?,
    };
    let mut closed = Vec::with_capacity(configs.len());
    for c in configs {
        let from_origin = multitime_pdf(setup.family, &[big_t], std::slice::from_ref(c), &origin)?;
        let ensemble = shifted_law.pdf(c)?;
        let err = (from_origin - ensemble).abs() / ensemble.abs().max(1e-300);
        if err > 1e-8 {
            return Err(crate::Error::Inconsistent {
                what: "origin density against ensemble density",
                rel_err: err,
                tol: 1e-8,
            });
        }
        closed.push(from_origin);
    }
    let grid = configs.iter().map(|c| c.points().to_vec()).collect();
    run("density_shift", setup, grid, closed, |xi, g| {
        multitime_pdf(
            setup.family,
            &[setup.t],
            &[Configuration::new(g.to_vec())?],
            xi,
        )
    })
}

/// Two-time check: `E[det K^Ξ]` over the points `(t_1, x_1), (t_2, x_2)`
/// against the origin kernel at `t_m + σ²`. Each grid entry is
/// `[t_1, x_1, t_2, x_2]` with `t_1 < t_2`; `setup.t` is unused.
pub fn verify_spacetime(setup: &Setup, points: &[[f64; 4]]) -> Result<Report> {
    setup.check()?;
    let blocks = |g: &[f64], shift: f64| {
        vec![
            TimeBlock {
                t: g[0] + shift,
                points: vec![g[1]],
            },
            TimeBlock {
                t: g[2] + shift,
                points: vec![g[3]],
            },
        ]
    };
    let origin = InitialConfig::origin(setup.n);
    let closed = points
        .iter()
        .map(|p| corr_fn(setup.family, &blocks(p, setup.sigma2), &origin))
        .collect::<Result<Vec<_>>>()?;
    let grid = points.iter().map(|p| p.to_vec()).collect();
    run("spacetime", setup, grid, closed, |xi, g| {
        corr_fn(setup.family, &blocks(g, 0.0), xi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densities::gauss;
    use crate::quad::integrate_real_line;

    fn setup(family: Family, n: usize, samples: usize, seed: u64) -> Setup {
        Setup {
            family,
            n,
            sigma2: 0.5,
            t: 0.5,
            samples,
            seed,
        }
    }

    #[test]
    fn acceptance_rule() {
        assert!(accept(&[0.1, -1.9, 2.5]));
        assert!(!accept(&[0.1, 2.1, 2.5]));
        assert!(!accept(&[3.1]));
        assert!(!accept(&[f64::NAN]));
        let mut many = vec![0.0; 40];
        many[0] = 2.5;
        many[1] = -2.5;
        assert!(accept(&many));
        many[2] = 2.5;
        assert!(!accept(&many));
    }

    #[test]
    fn gaussian_convolution() {
        for &x in &[-1.0, 0.3, 2.0] {
            let v = integrate_real_line(|a| gauss(0.5, a, 0.0) * gauss(0.7, x, a), 0.0, 1.0, 1e-13)
                .unwrap();
            assert!((v - gauss(1.2, x, 0.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn one_particle_onepoint() {
        let r = verify_onepoint(&setup(Family::Bm, 1, 20_000, 1), &[-1.0, 0.0, 1.5]).unwrap();
        assert!(r.pass, "{r:?}");
        let r = verify_onepoint(
            &setup(Family::Besq { nu: 0.0 }, 1, 20_000, 2),
            &[0.2, 1.0, 2.5],
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn two_particle_checks() {
        let bm = setup(Family::Bm, 2, 20_000, 3);
        assert!(
            verify_onepoint(&bm, &[-2.0, -1.0, 0.0, 1.0, 2.0])
                .unwrap()
                .pass
        );
        assert!(
            verify_det_block(&bm, &[vec![-0.5, 0.7], vec![0.0, 1.2]])
                .unwrap()
                .pass
        );
        let besq = setup(Family::Besq { nu: 0.5 }, 2, 20_000, 4);
        assert!(verify_det_block(&besq, &[vec![0.3, 1.5]]).unwrap().pass);
        let c = Configuration::new(vec![-0.4, 0.9]).unwrap();
        assert!(verify_density_shift(&bm, &[c]).unwrap().pass);
        assert!(
            verify_spacetime(&bm, &[[0.3, 0.2, 0.8, -0.4]])
                .unwrap()
                .pass
        );
    }

    #[test]
    fn report_serialises() {
        let r = verify_onepoint(&setup(Family::Bm, 1, 100, 5), &[0.0]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in [
            "op",
            "params",
            "grid",
            "estimates",
            "closed_form",
            "stderr",
            "z",
            "pass",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["op"], "onepoint");
        assert_eq!(v["params"]["family"]["family"], "bm");
    }

    #[test]
    fn invalid_inputs() {
        let bm = setup(Family::Bm, 2, 100, 6);
        assert!(verify_det_block(&bm, &[vec![0.0, 0.0]]).is_err());
        assert!(verify_det_block(&bm, &[vec![0.0, 1.0, 2.0]]).is_err());
        let mut bad = bm;
        bad.t = 0.0;
        assert!(verify_onepoint(&bad, &[0.0]).is_err());
    }
}
