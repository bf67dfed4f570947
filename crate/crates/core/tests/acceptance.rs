//! Acceptance suite: every criterion at its stated tolerance and runtime
//! budget, one line per criterion. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rmtdet::biorth::Family;
use rmtdet::charpoly::{closed_form, mc_charpoly, AlphaGrid};
use rmtdet::equivalence::{verify_density_shift, verify_det_block, verify_onepoint, verify_spacetime, Report, Setup};
use rmtdet::identities::{self, Check};
use rmtdet::processes::{gap_statistics, matrix_paths, warm_start_paths};
use rmtdet::stats::{ks_critical_two_sample, ks_two_sample};
use rmtdet::{Complex64, Configuration, EnsembleKind, EnsembleSpec, Result};

type Verdict = Result<(bool, String)>;
type Criterion = (&'static str, Duration, fn() -> Verdict);

fn from_checks(checks: &[Check]) -> Verdict {
    let pass = checks.iter().all(|c| c.pass);
    let detail = checks
        .iter()
        .map(|c| format!("{} {:.1e}/{:.0e}", c.name, c.max_err, c.tol))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((pass, detail))
}

fn cross_form_equivalence() -> Verdict {
    from_checks(&[identities::gue_forms(1)?, identities::laguerre_forms(1)?])
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn monte_carlo_oracle() -> Verdict {
    const SAMPLES: usize = 100_000;
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut seed = 1000;
    let mut all = true;

    // Values forced by the first two moments of 1×1 matrices.
    let forced = [
        (EnsembleSpec::gue(1, 1.0)?, 1.0),
        (EnsembleSpec::chgue(1, 0.0, 0.5)?, 1.0),
    ];
    for (spec, value) in forced {
        let alpha = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let closed = closed_form(&spec, &AlphaGrid::new(alpha.clone())?)?;
        all &= (closed - c(value, 0.0)).norm() < 1e-12;
        let z = mc_charpoly(&spec, &alpha, SAMPLES, seed)?.z(c(value, 0.0));
        seed += 1;
        cases += 1;
        worst = worst.max(z);
    }

    // Products of up to 12 linear factors are heavy-tailed and the sample
    // standard error is unreliable at 10⁵ draws. The exact one follows from
    // E|Π|² = M(α ∪ ᾱ), another closed form, so the points are kept off the
    // real axis and away from each other's conjugates.
    let alphas = [
        vec![c(0.3, 0.2), c(-0.7, 0.5)],
        vec![c(0.3, 0.2), c(-0.7, 0.5), c(1.1, -0.4), c(0.2, 0.9)],
    ];
    let mut specs = Vec::new();
    for n in 1..=3 {
        specs.push(EnsembleSpec::gue(n, 1.0)?);
        for nu in [-0.5, 0.0, 2.3] {
            specs.push(EnsembleSpec::chgue(n, nu, 0.5)?);
        }
        specs.push(EnsembleSpec::new(EnsembleKind::ClassC, n, 0.0, 0.7)?);
        specs.push(EnsembleSpec::new(EnsembleKind::ClassD, n, 0.0, 0.7)?);
    }
    let mut worst_sample: f64 = 0.0;
    for spec in &specs {
        for alpha in &alphas {
            let closed = closed_form(spec, &AlphaGrid::new(alpha.clone())?)?;
            let doubled: Vec<Complex64> = alpha.iter().copied().chain(alpha.iter().map(|a| a.conj())).collect();
            let second = closed_form(spec, &AlphaGrid::new(doubled)?)?;
            let stderr = ((second.re - closed.norm_sqr()) / SAMPLES as f64).sqrt();
            let mc = mc_charpoly(spec, alpha, SAMPLES, seed)?;
            seed += 1;
            cases += 1;
            worst = worst.max((mc.estimate - closed).norm() / stderr);
            worst_sample = worst_sample.max(mc.z(closed));
        }
    }
    all &= worst <= 3.0;
    Ok((
        all,
        format!("{cases} averages, max |z| {worst:.2} (with sample standard errors {worst_sample:.2})"),
    ))
}

fn ishikawa_battery() -> Verdict {
    let mut checks = identities::ishikawa(1)?;
    checks.push(identities::vandermonde_split(1)?);
    from_checks(&checks)
}

fn kernel_structure() -> Verdict {
    let mut checks = identities::chapman_kolmogorov()?;
    checks.push(identities::extended_kernels()?);
    checks.push(identities::biorthogonality()?);
    checks.push(identities::phi_closed_forms()?);
    from_checks(&checks)
}

fn karlin_mcgregor() -> Verdict {
    from_checks(&[
        identities::karlin_mcgregor_distinct(1)?,
        identities::karlin_mcgregor_double(1)?,
        identities::h_minus_vandermonde(1)?,
    ])
}

fn time_shift_equivalence() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut reports = 0;
    let families = [Family::Bm, Family::Besq { nu: 0.0 }, Family::Besq { nu: 0.5 }];
    for (i, family) in families.into_iter().enumerate() {
        let setup = Setup {
            family,
            n: 2,
            sigma2: 0.5,
            t: 0.5,
            samples: 100_000,
            seed: 2000 + 10 * i as u64,
        };
        let at = |seed_offset: u64| Setup {
            seed: setup.seed + seed_offset,
            ..setup
        };
        let bm = family == Family::Bm;
        let xs: Vec<f64> = if bm {
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        } else {
            vec![0.25, 0.5, 1.0, 1.5, 2.5]
        };
        let pairs: Vec<Vec<f64>> = if bm {
            vec![vec![-1.0, 0.5], vec![-0.3, 1.2], vec![0.4, 1.8]]
        } else {
            vec![vec![0.3, 1.2], vec![0.6, 2.0], vec![1.0, 3.0]]
        };
        let configs = pairs
            .iter()
            .map(|p| Configuration::new(p.clone()))
            .collect::<Result<Vec<_>>>()?;
        let spacetime: Vec<[f64; 4]> = if bm {
            vec![[0.3, 0.2, 0.8, -0.4], [0.2, -1.0, 0.6, 0.5], [0.5, 0.0, 0.7, 0.9]]
        } else {
            vec![[0.3, 0.5, 0.8, 1.0], [0.2, 1.5, 0.6, 0.4], [0.5, 0.8, 0.7, 2.0]]
        };
        let runs: [Report; 4] = [
            verify_onepoint(&at(0), &xs)?,
            verify_det_block(&at(1), &pairs)?,
            verify_density_shift(&at(2), &configs)?,
            verify_spacetime(&at(3), &spacetime)?,
        ];
        for r in &runs {
            reports += 1;
            worst = r.z.iter().fold(worst, |w, z| if z.is_nan() { f64::INFINITY } else { w.max(z.abs()) });
        }
    }
    Ok((worst <= 3.0, format!("{reports} reports, max |z| {worst:.2}")))
}

fn process_simulation() -> Verdict {
    let times = [0.25, 0.5, 1.0];
    let matrix = matrix_paths(Family::Bm, 2, &times, 10_000, 3000)?;
    let mut worst_z: f64 = 0.0;
    // Matrix trajectories include the start at t = 0.
    for s in gap_statistics(&matrix)?.iter().skip(1) {
        let (m, se) = s.gap_sq[0];
        worst_z = worst_z.max((m - 6.0 * s.t).abs() / se);
    }
    let euler = warm_start_paths(Family::Bm, 2, 1e-3, &times, 1e-4, 4000, 3001)?;
    let mut worst_rel: f64 = 0.0;
    for s in gap_statistics(&euler)?.iter().skip(1) {
        let (m, _) = s.gap_sq[0];
        worst_rel = worst_rel.max((m - 6.0 * s.t).abs() / (6.0 * s.t));
    }
    let last = |trajs: &[rmtdet::processes::Trajectory], j: usize| -> Vec<f64> {
        trajs.iter().map(|tr| tr.states.last().expect("states")[j]).collect()
    };
    let mut worst_ks: f64 = 0.0;
    for j in 0..2 {
        let (a, b) = (last(&matrix, j), last(&euler, j));
        worst_ks = worst_ks.max(ks_two_sample(&a, &b) / ks_critical_two_sample(a.len(), b.len(), 0.05));
    }
    let pass = worst_z <= 3.0 && worst_rel <= 0.05 && worst_ks < 1.0;
    Ok((
        pass,
        format!(
            "matrix max |z| {worst_z:.2}, euler max rel err {:.2}%, KS/critical {worst_ks:.2}",
            100.0 * worst_rel
        ),
    ))
}

fn class_consistency() -> Verdict {
    from_checks(&[identities::class_forms(1)?, identities::half_index_bridges()?])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("cross-form equivalence", Duration::from_secs(10), cross_form_equivalence),
        ("Monte Carlo oracle agreement", Duration::from_secs(120), monte_carlo_oracle),
        ("Ishikawa identity battery", Duration::from_secs(5), ishikawa_battery),
        ("kernel structure", Duration::from_secs(60), kernel_structure),
        ("Karlin-McGregor identities", Duration::from_secs(10), karlin_mcgregor),
        ("time-shift equivalence", Duration::from_secs(300), time_shift_equivalence),
        ("process simulation", Duration::from_secs(300), process_simulation),
        ("class C/D consistency", Duration::from_secs(10), class_consistency),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && elapsed <= *budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{} {}. {name}: {detail} [{:.1} s / {} s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
