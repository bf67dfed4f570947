//! `rmtdet`: seeded sampling, closed forms, kernels, path simulation and
//! Monte Carlo verification from the command line.

mod args;
mod emit;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use rmtdet::biorth::{corr_kernel, Family};
use rmtdet::charpoly::{closed_form, mc_charpoly, AlphaGrid};
use rmtdet::equivalence::{self, Report, Setup};
use rmtdet::processes::{euler_paths, gap_statistics, matrix_paths, warm_start_paths, Method};
use rmtdet::{identities, Configuration, EnsembleSpec, InitialConfig};

use crate::args::{Cli, Command, Format, KernelArgs, SimulateArgs, VerifyArgs, VerifyOp};
use crate::emit::{complex_json, csv_float, to_json_string};

/// Outcome of a subcommand: its rendered output and whether every
/// numerical check it ran passed.
struct Outcome {
    text: String,
    pass: bool,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<rmtdet::Error> for Failure {
    fn from(e: rmtdet::Error) -> Self {
        match e {
            rmtdet::Error::Domain(_)
            | rmtdet::Error::Dimension { .. }
            | rmtdet::Error::Unsupported(_)
            | rmtdet::Error::DeltaMeasure
            | rmtdet::Error::Coincident { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(pass) => ExitCode::from(if pass { 0 } else { 1 }),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let seed = cli.seed()?;
    let outcome = match &cli.command {
        Command::Sample(a) => sample(cli, a, seed)?,
        Command::Charpoly(a) => charpoly(cli, a, seed)?,
        Command::Kernel(a) => kernel(cli, a)?,
        Command::Simulate(a) => return simulate(cli, a, seed),
        Command::Verify(a) => verify(cli, a, seed)?,
        Command::Identities => identities_battery(cli, seed)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, &outcome.text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.pass)
}

fn sample(cli: &Cli, a: &args::SampleArgs, seed: u64) -> Result<Outcome, Failure> {
    let spec = EnsembleSpec::new(a.ensemble.parse()?, a.n, a.nu, a.sigma2)?;
    let draws: Vec<Configuration> = (0..a.count as u64).map(|i| spec.sample(seed, i)).collect();
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("draw");
            for j in 1..=a.n {
                out.push_str(&format!(",x_{j}"));
            }
            out.push('\n');
            for (i, d) in draws.iter().enumerate() {
                out.push_str(&i.to_string());
                for x in d.iter() {
                    out.push(',');
                    out.push_str(&csv_float(*x));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => to_json_string(&json!({
            "ensemble": spec.kind().name(),
            "n": a.n,
            "nu": spec.law_nu(),
            "sigma2": a.sigma2,
            "seed": seed,
            "draws": draws.iter().map(|d| d.points().to_vec()).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { text, pass: true })
}

fn charpoly(cli: &Cli, a: &args::CharpolyArgs, seed: u64) -> Result<Outcome, Failure> {
    let spec = EnsembleSpec::new(a.ensemble.parse()?, a.n_matrix, a.nu, a.sigma2)?;
    let alpha = args::parse_alpha_list(&a.alpha).map_err(usage)?;
    // Closed forms exist for an even number of points; Monte Carlo takes any.
    let closed = if alpha.len() % 2 == 0 {
        Some(closed_form(&spec, &AlphaGrid::new(alpha.clone())?)?)
    } else if a.mc {
        None
    } else {
        return Err(usage("closed forms need an even number of points; pass --mc for odd counts"));
    };
    let mc = if a.mc {
        Some(mc_charpoly(&spec, &alpha, cli.samples.unwrap_or(100_000), seed)?)
    } else {
        None
    };
    let z = mc.zip(closed).map(|(r, c)| r.z(c));
    let pass = z.map_or(true, |z| z <= 3.0);
    let estimate = closed.or(mc.map(|r| r.estimate)).expect("closed form or Monte Carlo");
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = json!({
                "ensemble": spec.kind().name(),
                "n_matrix": a.n_matrix,
                "nu": spec.law_nu(),
                "sigma2": a.sigma2,
                "alpha": alpha.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                "estimate": complex_json(estimate),
                "method": if closed.is_some() { "closed_form" } else { "monte_carlo" },
                "pass": pass,
            });
            if let Some(r) = mc {
                v["mc"] = json!({
                    "estimate": complex_json(r.estimate),
                    "stderr": r.stderr,
                    "z": z,
                    "samples": r.samples,
                    "seed": r.seed,
                });
            }
            to_json_string(&v)
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or(String::new(), csv_float);
            format!(
                "estimate_re,estimate_im,mc_re,mc_im,stderr,z,pass\n{},{},{},{},{},{},{}\n",
                csv_float(estimate.re),
                csv_float(estimate.im),
                opt(mc.map(|r| r.estimate.re)),
                opt(mc.map(|r| r.estimate.im)),
                opt(mc.map(|r| r.stderr)),
                opt(z),
                pass
            )
        }
    };
    Ok(Outcome { text, pass })
}

fn kernel(cli: &Cli, a: &KernelArgs) -> Result<Outcome, Failure> {
    let family = a.family.resolve(a.nu)?;
    let init = match &a.init {
        Some(list) => InitialConfig::from_points(args::parse_f64_list(list).map_err(usage)?)?,
        None => InitialConfig::origin(a.n),
    };
    if init.len() != a.n {
        return Err(usage(format!("--init has {} points but --N is {}", init.len(), a.n)));
    }
    let xs = args::parse_grid(&a.x).map_err(usage)?;
    let ys = match &a.y {
        Some(g) => args::parse_grid(g).map_err(usage)?,
        None => xs.clone(),
    };
    let s = a.s.unwrap_or(a.time);
    let mut rows = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            rows.push((x, y, corr_kernel(family, s, x, a.time, y, &init)?));
        }
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = String::from("x,y,k\n");
            for (x, y, k) in &rows {
                out.push_str(&format!("{},{},{}\n", csv_float(*x), csv_float(*y), csv_float(*k)));
            }
            out
        }
        Format::Json => to_json_string(&json!({
            "family": family,
            "n": a.n,
            "s": s,
            "t": a.time,
            "init": init.atoms(),
            "x": rows.iter().map(|r| r.0).collect::<Vec<_>>(),
            "y": rows.iter().map(|r| r.1).collect::<Vec<_>>(),
            "k": rows.iter().map(|r| r.2).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { text, pass: true })
}

fn simulate(cli: &Cli, a: &SimulateArgs, seed: u64) -> Result<bool, Failure> {
    let family = a.family.resolve(a.nu)?;
    let times = args::parse_f64_list(&a.times).map_err(usage)?;
    let method = Method::from(a.method);
    let trajs = match method {
        Method::Matrix => matrix_paths(family, a.n, &times, a.paths, seed)?,
        Method::Euler => match &a.x0 {
            Some(list) => {
                let x0 = Configuration::from_unsorted(args::parse_f64_list(list).map_err(usage)?)?;
                if x0.len() != a.n {
                    return Err(usage(format!("--x0 has {} points but --N is {}", x0.len(), a.n)));
                }
                euler_paths(family, &x0, &times, a.dt, a.paths, seed)?
            }
            None => warm_start_paths(family, a.n, a.warm_start, &times, a.dt, a.paths, seed)?,
        },
    };
    let mut manifest = json!({
        "family": family,
        "method": method,
        "n": a.n,
        "seed": seed,
        "dt": if method == Method::Euler { Some(a.dt) } else { None },
        "paths": a.paths,
        "times": times,
    });
    if a.n >= 2 && a.paths >= 2 {
        manifest["gap_statistics"] = serde_json::to_value(gap_statistics(&trajs)?).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    match &cli.out {
        Some(dir) => {
            write_paths(dir, &trajs.iter().map(|t| t.to_csv()).collect::<Vec<_>>(), &manifest)?;
        }
        None => {
            if trajs.len() != 1 {
                return Err(usage("--out DIR is required when simulating more than one path"));
            }
            print!("{}", trajs[0].to_csv());
            eprint!("{}", to_json_string(&manifest));
        }
    }
    Ok(true)
}

fn write_paths(dir: &Path, csvs: &[String], manifest: &Value) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Runtime(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let width = csvs.len().saturating_sub(1).to_string().len();
    for (i, csv) in csvs.iter().enumerate() {
        fs::write(dir.join(format!("path_{i:0width$}.csv")), csv).map_err(io)?;
    }
    fs::write(dir.join("manifest.json"), to_json_string(manifest)).map_err(io)
}

fn verify(cli: &Cli, a: &VerifyArgs, seed: u64) -> Result<Outcome, Failure> {
    let family = a.family.resolve(a.nu)?;
    let setup = Setup {
        family,
        n: a.n,
        sigma2: a.sigma2,
        t: a.t,
        samples: cli.samples.unwrap_or(100_000),
        seed,
    };
    let besq = matches!(family, Family::Besq { .. });
    let report = match a.op {
        VerifyOp::Onepoint => {
            let xs = match &a.x {
                Some(list) => args::parse_f64_list(list).map_err(usage)?,
                None if besq => vec![0.25, 0.5, 1.0, 1.5, 2.5],
                None => vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            };
            equivalence::verify_onepoint(&setup, &xs)?
        }
        VerifyOp::DetBlock => {
            let tuples = match &a.points {
                Some(p) => args::parse_tuples(p).map_err(usage)?,
                None if besq => vec![vec![0.3, 1.2], vec![0.6, 2.0], vec![1.0, 3.0]],
                None => vec![vec![-1.0, 0.5], vec![-0.3, 1.2], vec![0.4, 1.8]],
            };
            equivalence::verify_det_block(&setup, &tuples)?
        }
        VerifyOp::Density => {
            let tuples = match &a.points {
                Some(p) => args::parse_tuples(p).map_err(usage)?,
                None => default_configs(a.n, besq),
            };
            let configs = tuples
                .into_iter()
                .map(Configuration::from_unsorted)
                .collect::<Result<Vec<_>, _>>()?;
            equivalence::verify_density_shift(&setup, &configs)?
        }
        VerifyOp::Spacetime => {
            let pts = match &a.points {
                Some(p) => args::parse_tuples(p)
                    .map_err(usage)?
                    .into_iter()
                    .map(|v| <[f64; 4]>::try_from(v).map_err(|_| usage("space-time points need four values t1,x1,t2,x2")))
                    .collect::<Result<Vec<_>, _>>()?,
                None if besq => vec![[0.3, 0.5, 0.8, 1.0], [0.2, 1.5, 0.6, 0.4]],
                None => vec![[0.3, 0.2, 0.8, -0.4], [0.2, -1.0, 0.6, 0.5]],
            };
            equivalence::verify_spacetime(&setup, &pts)?
        }
    };
    Ok(Outcome {
        pass: report.pass,
        text: render_report(&report, cli.format.unwrap_or(Format::Json)),
    })
}

/// Test configurations spread around the bulk of the `N`-point law.
fn default_configs(n: usize, besq: bool) -> Vec<Vec<f64>> {
    (0..5)
        .map(|k| {
            let shift = 0.15 * k as f64;
            (0..n)
                .map(|j| {
                    let base = if besq { 0.3 + 0.9 * j as f64 } else { -0.8 + 1.1 * j as f64 };
                    base + shift * (j as f64 + 1.0)
                })
                .collect()
        })
        .collect()
}

fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json_string(&serde_json::to_value(report).expect("reports serialise")),
        Format::Csv => {
            let mut out = String::from("point,estimate,closed_form,stderr,z\n");
            for i in 0..report.grid.len() {
                let point: Vec<String> = report.grid[i].iter().map(|v| csv_float(*v)).collect();
                out.push_str(&format!(
                    "\"{}\",{},{},{},{}\n",
                    point.join(" "),
                    csv_float(report.estimates[i]),
                    csv_float(report.closed_form[i]),
                    csv_float(report.stderr[i]),
                    csv_float(report.z[i])
                ));
            }
            out
        }
    }
}

fn identities_battery(cli: &Cli, seed: u64) -> Result<Outcome, Failure> {
    let checks = identities::run_all(seed)?;
    let pass = checks.iter().all(|c| c.pass);
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json_string(&json!({ "seed": seed, "checks": checks, "pass": pass })),
        Format::Csv => {
            let mut out = String::from("name,cases,max_err,tol,pass\n");
            for c in &checks {
                out.push_str(&format!("{},{},{},{},{}\n", c.name, c.cases, csv_float(c.max_err), csv_float(c.tol), c.pass));
            }
            out
        }
    };
    Ok(Outcome { text, pass })
}
