//! Command-line grammar and the small parsers for list-valued flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use rmtdet::biorth::Family;
use rmtdet::processes::Method;
use rmtdet::rng::parse_seed;

use crate::Failure;

#[derive(Debug, Parser)]
#[command(name = "rmtdet", version, about = "Noncolliding diffusions and characteristic-polynomial averages")]
#[command(args_conflicts_with_subcommands = false, allow_negative_numbers = true)]
pub struct Cli {
    /// Seed, decimal or 0x-prefixed hex.
    #[arg(long, global = true, env = "RMT_SEED", default_value = "0")]
    pub seed: String,

    /// Monte Carlo sample count (default 100000).
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Output file (a directory for `simulate`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn seed(&self) -> Result<u64, Failure> {
        parse_seed(&self.seed).map_err(Failure::from)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw eigenvalue configurations.
    Sample(SampleArgs),
    /// Closed form (and optionally Monte Carlo) of a characteristic-polynomial average.
    Charpoly(CharpolyArgs),
    /// Evaluate the correlation kernel on a grid.
    Kernel(KernelArgs),
    /// Simulate noncolliding paths.
    Simulate(SimulateArgs),
    /// Monte Carlo check of the time-shift equivalence.
    Verify(VerifyArgs),
    /// Run the identity battery.
    Identities,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SampleArgs {
    /// gue, chgue, classc or classd.
    #[arg(long)]
    pub ensemble: String,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Number of draws.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CharpolyArgs {
    #[arg(long)]
    pub ensemble: String,
    #[arg(long = "n-matrix")]
    pub n_matrix: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Comma-separated points, each `re` or `re+imi` / `re-imi`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Also estimate the average by Monte Carlo.
    #[arg(long)]
    pub mc: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Bm,
    Besq,
}

impl FamilyArg {
    pub fn resolve(self, nu: f64) -> Result<Family, Failure> {
        match self {
            FamilyArg::Bm => Ok(Family::Bm),
            FamilyArg::Besq => Ok(Family::besq(nu)?),
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    /// Time of the second argument.
    #[arg(long = "time", alias = "t")]
    pub time: f64,
    /// Time of the first argument (defaults to `--time`).
    #[arg(long)]
    pub s: Option<f64>,
    /// Grid `lo:hi:count` or a comma list.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Second grid; defaults to the first.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Initial configuration; defaults to all particles at the origin.
    #[arg(long, allow_hyphen_values = true)]
    pub init: Option<String>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Matrix)]
    pub method: MethodArg,
    /// Output times, comma-separated and increasing.
    #[arg(long, allow_hyphen_values = true)]
    pub times: String,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    /// Euler start configuration; without it Euler starts from the matrix
    /// state at `--warm-start`.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long = "warm-start", default_value_t = 1e-3)]
    pub warm_start: f64,
    #[arg(long, default_value_t = 1)]
    pub paths: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Euler,
    Matrix,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Euler => Method::Euler,
            MethodArg::Matrix => Method::Matrix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyOp {
    Onepoint,
    DetBlock,
    Density,
    Spacetime,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub op: VerifyOp,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long = "N", alias = "n")]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.5)]
    pub sigma2: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    /// Points for `onepoint`, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Tuples for the other checks: `a,b;c,d;…`.
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    let out: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("invalid number {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(format!("non-finite value in {s:?}"));
    }
    Ok(out)
}

/// `lo:hi:count` (inclusive, evenly spaced) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, count] => {
            let lo: f64 = lo.trim().parse().map_err(|e| format!("invalid grid start {lo:?}: {e}"))?;
            let hi: f64 = hi.trim().parse().map_err(|e| format!("invalid grid end {hi:?}: {e}"))?;
            let count: usize = count.trim().parse().map_err(|e| format!("invalid grid count {count:?}: {e}"))?;
            if count == 0 || !lo.is_finite() || !hi.is_finite() {
                return Err(format!("invalid grid {s:?}"));
            }
            if count == 1 {
                return Ok(vec![lo]);
            }
            let h = (hi - lo) / (count - 1) as f64;
            Ok((0..count).map(|i| if i + 1 == count { hi } else { lo + i as f64 * h }).collect())
        }
        [_] => parse_f64_list(s),
        _ => Err(format!("invalid grid {s:?}; expected lo:hi:count or a comma list")),
    }
}

/// Semicolon-separated tuples of comma-separated numbers.
pub fn parse_tuples(s: &str) -> Result<Vec<Vec<f64>>, String> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_f64_list).collect()
}

/// One complex number: `re`, `imi`, `re+imi` or `re-imi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    let err = || format!("invalid complex number {s:?}");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // Split at the last sign that is not part of an exponent or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().map_err(|_| err())?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| err())?,
    };
    let z = Complex64::new(re, im);
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(err());
    }
    Ok(z)
}

pub fn parse_alpha_list(s: &str) -> Result<Vec<Complex64>, String> {
    s.split(',').map(parse_complex).collect()
}
