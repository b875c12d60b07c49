use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cliffstring",
    version,
    about = "Property sweeps and reports for octonionic string numerics"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Seed for the pseudorandom stream.
    #[arg(long, global = true, env = "CLIFFSTRING_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Input file (a Hermitian matrix or a mode spectrum).
    #[arg(long, global = true, visible_alias = "spectrum")]
    pub input: Option<PathBuf>,
    /// Where to write the JSON report (stdout if absent).
    #[arg(long, global = true, visible_alias = "report")]
    pub output: Option<PathBuf>,
    /// Per-check tolerance, written `--tol.<name> <value>` on the command line.
    #[arg(long = "tol-override", global = true, hide = true, value_parser = parse_tolerance)]
    pub tol_override: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Norm composition, alternativity and conjugation over random pairs.
    OctonionCheck,
    /// Resolve a Hermitian matrix from --input, or sweep random ones.
    Resolve {
        /// Pivot tolerance, and the residual bound when given.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Pivot::Banded)]
        pivot: Pivot,
        /// Largest matrix size in a random sweep.
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Nested transforms, spinor compatibility and contraction invariance.
    LorentzCheck {
        #[arg(long, default_value_t = 5)]
        nest_depth: usize,
    },
    /// Current conservation, boundary flux, charge and field equations.
    StringModes {
        /// Lattice resolution.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Highest mode number of a random spectrum.
        #[arg(long, default_value_t = 3)]
        modes: i32,
        /// Write X and J on a (τ, σ) grid as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// τ samples in the CSV scan.
        #[arg(long, default_value_t = 16)]
        tau_samples: usize,
    },
    /// Canonical, mixed and Lorentz relations in the polynomial representation.
    QuantumCheck {
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// Degree bound of the J^z spectrum.
        #[arg(long, default_value_t = 4)]
        jz_degree: usize,
        /// Sign of iħ asserted in the closure relations.
        #[arg(long, value_enum, default_value_t = Sign::Plus)]
        closure_sign: Sign,
    },
    /// Redshift of light from a linearly growing string.
    Redshift {
        #[arg(long)]
        t_emit: f64,
        #[arg(long)]
        t_obsv: f64,
        /// Fraction p for the emission-time bound.
        #[arg(long)]
        p: Option<f64>,
        /// Observed redshift for the bound (defaults to the computed z).
        #[arg(long)]
        z_obsv: Option<f64>,
    },
    /// Write a reproducible random input file.
    GenFixture {
        #[arg(value_enum)]
        kind: FixtureKind,
        /// Matrix size for `hermitian`.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Highest mode number for `spectrum`.
        #[arg(long, default_value_t = 2)]
        modes: i32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pivot {
    Banded,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixtureKind {
    Hermitian,
    Spectrum,
    Spinor,
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = value
        .parse()
        .map_err(|e| format!("tolerance {name}: {e}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance {name} must be positive"));
    }
    Ok((name.to_string(), v))
}

/// Rewrites `--tol.<name> <v>` and `--tol.<name>=<v>` as
/// `--tol-override <name>=<v>` so clap can parse them.
pub fn preprocess_args<I, T>(args: I) -> Vec<OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let mut out = Vec::new();
    let mut it = args.into_iter().map(Into::into).peekable();
    while let Some(arg) = it.next() {
        let Some(rest) = arg
            .to_str()
            .and_then(|s| s.strip_prefix("--tol."))
            .map(str::to_owned)
        else {
            out.push(arg);
            continue;
        };
        out.push("--tol-override".into());
        if rest.contains('=') {
            out.push(rest.into());
        } else {
            let value = it
                .next()
                .map(|v| v.to_string_lossy().into_owned())
                .unwrap_or_default();
            out.push(format!("{rest}={value}").into());
        }
    }
    out
}

/// Everything a subcommand needs besides its own flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub trials: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> Result<Self, String> {
        if a.trials == Some(0) {
            return Err("--trials must be at least 1".into());
        }
        Ok(RunConfig {
            seed: a.seed,
            trials: a.trials,
            tolerances: a.tol_override.iter().cloned().collect(),
            input: a.input.clone(),
            output: a.output.clone(),
        })
    }

    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}
