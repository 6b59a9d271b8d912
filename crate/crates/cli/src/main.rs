//! `rlpw`: command-line front end for the rational-dilation wavelet toolkit.
//!
//! Exit codes: 0 pass, 1 check failed, 2 usage or bad input, 3 numerical convergence failure.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rlpw_core::{Exec, Flavor};

#[derive(Parser, Debug)]
#[command(
    name = "rlpw",
    version,
    about = "Rational-dilation Littlewood-Paley wavelet checks"
)]
struct Cli {
    /// Worker threads for the data-parallel loops; 1 runs everything sequentially.
    #[arg(long, env = "RLPW_JOBS", global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a wavelet kernel in time or frequency and write CSV.
    Atoms(AtomsArgs),
    /// Audit the Gram matrix of a block of atoms.
    Gram(GramArgs),
    /// Check the Auscher-flavor diagonal against the orthonormal value 1.
    Auscher(AuscherArgs),
    /// Exact disjointness and cover audit of the band supports.
    Tiling(TilingArgs),
    /// Parseval partial sums of a piecewise-constant spectrum.
    Parseval(ParsevalArgs),
    /// Synthesize random coefficient sets and analyze them back.
    Roundtrip(RoundtripArgs),
    /// Truncated bandpass-sampling reconstruction error versus n_max.
    Bandpass(BandpassArgs),
    /// Compare closed-form inner products with quadrature on random pairs.
    Oracle(OracleArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct DilationArgs {
    #[arg(long, default_value_t = 5)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    q: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FlavorArg {
    New,
    Auscher,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::New => Flavor::New,
            FlavorArg::Auscher => Flavor::Auscher,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Domain {
    Time,
    Freq,
    FreqScaled,
}

#[derive(Args, Debug)]
struct AtomsArgs {
    /// Preset masks for M = 5/3: scaled domain, j = 1, m = 1 or 2.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2),
          conflicts_with_all = ["p", "q", "m", "domain", "j", "flavor"])]
    fig: Option<u8>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long, value_enum)]
    flavor: Option<FlavorArg>,
    #[arg(long, value_enum)]
    domain: Option<Domain>,
    /// Scale index; only meaningful for `time` and `freq-scaled`.
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i64>,
    /// `lo:hi:step`; in units of pi for the frequency domains, where rationals like `3/5` are exact.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GramArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, value_enum, default_value = "new")]
    flavor: FlavorArg,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
    j_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-3:3")]
    n_range: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Diagonal value to test against instead of the flavor's own norm.
    #[arg(long)]
    expected_diag: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AuscherArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
    j_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-3:3")]
    n_range: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TilingArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, allow_hyphen_values = true, default_value = "-8:8")]
    j_range: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ParsevalArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, value_enum, default_value = "new")]
    flavor: FlavorArg,
    /// Spectrum JSON; defaults to the indicator of [pi, 4pi/3).
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Scales to analyze; required with --spectrum, 0:0 for the default example.
    #[arg(long, allow_hyphen_values = true)]
    j_range: Option<String>,
    #[arg(
        long = "N-list",
        value_delimiter = ',',
        default_value = "0,1,4,16,64,256,1024,4096"
    )]
    n_list: Vec<u64>,
    /// Relative deficit allowed at the largest N.
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    #[arg(long)]
    coeffs_out: Option<PathBuf>,
    /// Drop coefficients with modulus below this from the CSV.
    #[arg(long)]
    prune: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, value_enum, default_value = "new")]
    flavor: FlavorArg,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    sets: usize,
    #[arg(long, default_value_t = 200)]
    max_atoms: usize,
    #[arg(long, allow_hyphen_values = true, default_value = "-1:1")]
    j_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-50:50")]
    n_range: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BandpassArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    j: i64,
    #[arg(long, default_value_t = 1)]
    m: i64,
    /// Spectrum JSON inside band (j, m); defaults to two fixed pieces of the band.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "256,512,1024,2048,4096")]
    n_max: Vec<u64>,
    /// `lo:hi:step` in x; defaults to 256 points spanning 64/3 sampling periods.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OracleDomain {
    Freq,
    Time,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    dil: DilationArgs,
    #[arg(long, value_enum, default_value = "new")]
    flavor: FlavorArg,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    pairs: usize,
    #[arg(long, value_enum, default_value = "freq")]
    domain: OracleDomain,
    #[arg(long, allow_hyphen_values = true, default_value = "-2:2")]
    j_range: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-6:6")]
    n_range: String,
    /// Defaults to 1e-8 in frequency and 5e-3 in time.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a subcommand, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Check(String),
    Usage(String),
    Convergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Convergence(_) => 3,
        }
    }
}

impl From<rlpw_core::Error> for Failure {
    fn from(e: rlpw_core::Error) -> Self {
        match e {
            rlpw_core::Error::Convergence { .. } => Failure::Convergence(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

fn setup_pool(jobs: Option<usize>) -> Result<Exec, Failure> {
    match jobs {
        None => Ok(Exec::Parallel),
        Some(0) => Err(Failure::Usage("RLPW_JOBS must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Usage(format!("thread pool: {e}")))?;
            Ok(Exec::Parallel)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let exec = setup_pool(cli.jobs)?;
    match cli.cmd {
        Command::Atoms(a) => commands::atoms(a),
        Command::Gram(a) => commands::gram(a, exec),
        Command::Auscher(a) => commands::auscher(a, exec),
        Command::Tiling(a) => commands::tiling(a),
        Command::Parseval(a) => commands::parseval(a, exec),
        Command::Roundtrip(a) => commands::roundtrip(a, exec),
        Command::Bandpass(a) => commands::bandpass(a, exec),
        Command::Oracle(a) => commands::oracle(a, exec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check(msg) => eprintln!("FAIL: {msg}"),
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Convergence(msg) => eprintln!("convergence failure: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
