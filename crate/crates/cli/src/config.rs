//! Command-line schema and config parsing.
//!
//! Conventions:
//! - a complex scalar is written `re` or `re,im`;
//! - an ε-dependent parameter a(ε) is a `;`-separated list of complex
//!   polynomial coefficients, constant term first (`0.3;0.1,-0.2` means
//!   0.3 + (0.1 − 0.2i)·ε);
//! - a grid point is `modulus:argument` with the argument in radians and
//!   free to wind beyond (−π, π];
//! - `--eps-grid` is a comma-separated list of grid points and/or
//!   generators `log:START:STOP:N:ARG` (N moduli, geometric from START to
//!   STOP, all at argument ARG).

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypconf::{BranchedPoint, C64};

#[derive(Parser, Debug)]
#[command(
    name = "hypconf",
    version,
    about = "Numerical laboratory for the confluence of the hypergeometric equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Scan the unfolded Stokes multipliers λ±(ε), μ±(ε), their product L,
    /// and the distance to the ε → 0 limits over a grid of ε.
    Stokes(CommonArgs),
    /// Run a cross-module verification suite and emit a JSON report.
    /// Exit status is 0 iff every identity passes, 2 otherwise.
    Verify {
        /// Which identity suite to run.
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit CSV data behind the standard plots.
    Plotdata {
        /// Which data set to emit.
        #[arg(long, value_enum)]
        kind: PlotKind,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Upper parameter a, constant or polynomial in ε (see help header).
    #[arg(long, default_value = "0.3")]
    pub a: String,

    /// Upper parameter b, constant or polynomial in ε.
    #[arg(long, default_value = "0.45")]
    pub b: String,

    /// Single confluence parameter ε as `modulus:argument`.
    #[arg(long)]
    pub eps: Option<String>,

    /// Grid of ε values (comma-separated points / `log:…` generators).
    #[arg(long)]
    pub eps_grid: Option<String>,

    /// Sector selection for ε.
    #[arg(long, value_enum, default_value = "auto")]
    pub sector: SectorChoice,

    /// Sector opening safety angle γ (radians).
    #[arg(long, default_value_t = 0.3)]
    pub gamma: f64,

    /// Output format for tabular reports.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Seed for the deterministic sample generator.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SectorChoice {
    #[value(name = "plus", alias = "+")]
    Plus,
    #[value(name = "minus", alias = "-")]
    Minus,
    #[value(name = "auto")]
    Auto,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Monodromy,
    Borel,
    Riccati,
    Symmetry,
    Universal,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    #[value(name = "h_limit_scan")]
    HLimitScan,
    #[value(name = "stokes_limit_scan")]
    StokesLimitScan,
    #[value(name = "riccati_portrait")]
    RiccatiPortrait,
}

/// Parse `re` or `re,im` into a complex scalar.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let mut parts = s.splitn(2, ',');
    let re: f64 = parts
        .next()
        .unwrap_or("")
        .trim()
        .parse()
        .map_err(|_| format!("invalid real part in complex value {s:?}"))?;
    let im = match parts.next() {
        None => 0.0,
        Some(t) => t
            .trim()
            .parse()
            .map_err(|_| format!("invalid imaginary part in complex value {s:?}"))?,
    };
    Ok(C64::new(re, im))
}

/// A parameter that may depend polynomially on ε.
#[derive(Debug, Clone)]
pub struct ParamPoly {
    /// Coefficients, constant term first.
    pub coeffs: Vec<C64>,
}

impl ParamPoly {
    pub fn parse(s: &str) -> Result<Self, String> {
        let coeffs = s
            .split(';')
            .map(parse_complex)
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err("empty parameter polynomial".into());
        }
        Ok(Self { coeffs })
    }

    pub fn eval(&self, eps: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * eps + c;
        }
        acc
    }
}

/// Parse one `modulus:argument` grid point.
pub fn parse_branched(s: &str) -> Result<BranchedPoint<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("grid point {s:?} is not of the form modulus:argument"));
    }
    let m: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("invalid modulus in {s:?}"))?;
    let arg: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("invalid argument in {s:?}"))?;
    if !(m.is_finite() && m > 0.0) {
        return Err(format!("grid point {s:?} needs a finite positive modulus"));
    }
    Ok(BranchedPoint::new(m, arg))
}

/// Expand a full `--eps-grid` string. An empty string is the empty grid.
pub fn parse_eps_grid(s: &str) -> Result<Vec<BranchedPoint<f64>>, String> {
    let mut grid = Vec::new();
    for entry in s.split(',') {
        let entry = entry.trim();
        if entry.is_empty() {
            continue;
        }
        if let Some(rest) = entry.strip_prefix("log:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 4 {
                return Err(format!(
                    "generator {entry:?} is not of the form log:START:STOP:N:ARG"
                ));
            }
            let start: f64 = parts[0]
                .parse()
                .map_err(|_| format!("invalid START in {entry:?}"))?;
            let stop: f64 = parts[1]
                .parse()
                .map_err(|_| format!("invalid STOP in {entry:?}"))?;
            let n: usize = parts[2]
                .parse()
                .map_err(|_| format!("invalid N in {entry:?}"))?;
            let arg: f64 = parts[3]
                .parse()
                .map_err(|_| format!("invalid ARG in {entry:?}"))?;
            if !(start > 0.0 && stop > 0.0) {
                return Err(format!("generator {entry:?} needs positive moduli"));
            }
            if n == 0 {
                continue;
            }
            if n == 1 {
                grid.push(BranchedPoint::new(start, arg));
                continue;
            }
            let ratio = (stop / start).powf(1.0 / (n as f64 - 1.0));
            let mut m = start;
            for _ in 0..n {
                grid.push(BranchedPoint::new(m, arg));
                m *= ratio;
            }
        } else {
            grid.push(parse_branched(entry)?);
        }
    }
    Ok(grid)
}
