//! Command-line front end for `rieszlab`.
//!
//! Exit codes: 0 ok, 2 usage or parse error, 3 numeric failure, 4 no dual
//! (dependent input), 5 Gabor node outside the safe truncation window.

pub mod commands;
pub mod matrix_csv;
pub mod points;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use matrix_csv::ParseError;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_NO_DUAL: u8 = 4;
pub const EXIT_TRUNCATION: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error(transparent)]
    Numeric(#[from] rieszlab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use rieszlab::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Numeric(e) => match e.root() {
                E::NoBiorthogonalSequence { .. } => EXIT_NO_DUAL,
                E::Truncation { .. } => EXIT_TRUNCATION,
                // bad flag values rejected by the library constructors
                E::Family(_)
                | E::Discretization(_)
                | E::PointSet(_)
                | E::Shape(_)
                | E::Dimension { .. }
                | E::NonFinite { .. } => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rieszlab",
    version,
    about = "Riesz basis, Bessel and dual diagnostics for finite vector systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds, completeness defect, Gram spectrum and verdict of a matrix file.
    Analyze(AnalyzeArgs),
    /// Minimal biorthogonal dual of a matrix file.
    Dual(DualArgs),
    /// Write a named example system (and its partner, when defined) as CSV.
    Example(ExampleArgs),
    /// Scaling study over a family of nested truncations.
    Family(FamilyArgs),
    /// Discretized Gaussian Gabor system on a point set.
    Gabor(GaborArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Matrix CSV; columns are the sequence members.
    pub input: PathBuf,
    /// Matrix CSV of a candidate biorthogonal partner; residuals use it
    /// instead of the minimal dual.
    #[arg(long)]
    pub partner: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DualArgs {
    pub input: PathBuf,
    /// Where to write the dual matrix CSV.
    #[arg(long)]
    pub matrix_out: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleName {
    Orthonormal,
    Weighted,
    Alternating,
    Young,
    #[value(name = "youngGeneral")]
    YoungGeneral,
    Riesz,
}

impl ExampleName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleName::Orthonormal => "orthonormal",
            ExampleName::Weighted => "weighted",
            ExampleName::Alternating => "alternating",
            ExampleName::Young => "young",
            ExampleName::YoungGeneral => "youngGeneral",
            ExampleName::Riesz => "riesz",
        }
    }
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    pub name: ExampleName,
    /// Number of sequence members.
    #[arg(long)]
    pub n: usize,
    /// Seed for `riesz`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Complement dimension for `youngGeneral`.
    #[arg(long, default_value_t = 2)]
    pub complement: usize,
    /// Directory receiving `<name>-F.csv` and `<name>-G.csv`.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Orthonormal,
    Weighted,
    Alternating,
    Young,
    #[value(name = "youngGeneral")]
    YoungGeneral,
    Riesz,
    Punctured,
    Als,
    Lattice,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long = "gen")]
    pub generator: FamilyName,
    /// Comma-separated, strictly increasing, at least three.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub complement: usize,
    /// Grid half-width for Gabor families; chosen to fit the largest size when absent.
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Lattice spacings `a,b` for `lattice`.
    #[arg(long, value_parser = parse_pair, default_value = "1,1")]
    pub spacing: (f64, f64),
    /// Run sizes one after another on the calling thread.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Per-size table for plotting.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PointSetKind {
    Lattice,
    Punctured,
    Als,
    File,
}

#[derive(Debug, Args)]
pub struct GaborArgs {
    #[arg(long)]
    pub set: PointSetKind,
    #[arg(long, required_if_eq_any = [("set", "lattice"), ("set", "punctured")])]
    pub max_index: Option<usize>,
    #[arg(long, required_if_eq("set", "als"))]
    pub nmax: Option<usize>,
    /// Node list CSV (`tau,mu` per line) for `--set file`.
    #[arg(long, required_if_eq("set", "file"))]
    pub points: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 6.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 16)]
    pub samples: usize,
    /// Finer samples-per-unit values for the refinement study; `2·samples` when absent.
    #[arg(long, value_delimiter = ',')]
    pub refine: Vec<usize>,
    /// Node `tau,mu` of the atom whose distance to the span is tracked; defaults
    /// to the removed node for `punctured`, the origin for `als`, a cell centre
    /// for `lattice`, none for `file`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub probe: Option<(f64, f64)>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Where to dump the system matrix CSV.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

/// Parses `x,y` into a pair of finite reals.
fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let (x, y) = text.split_once(',').ok_or("expected two values `x,y`")?;
    let parse = |v: &str| match v.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{v}` is not a finite number")),
    };
    Ok((parse(x)?, parse(y)?))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Dual(args) => commands::dual(&args),
        Command::Example(args) => commands::example(&args),
        Command::Family(args) => commands::family(&args),
        Command::Gabor(args) => commands::gabor(&args),
    }
}
