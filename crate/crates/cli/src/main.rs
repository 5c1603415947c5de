//! `hnp`: enumeration of abelian extensions of Q, norm-principle density
//! scans and numerical checks of the counting identities.

mod commands;
mod opts;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use opts::PrimeList;
use output::Format;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Assertion(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Budget(_) => 2,
            CliError::Assertion(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Budget(m) => write!(f, "budget exhausted: {m}"),
            CliError::Assertion(m) => write!(f, "check failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<hasse_core::Error> for CliError {
    fn from(e: hasse_core::Error) -> Self {
        match e {
            hasse_core::Error::Budget(_) => CliError::Budget(e.to_string()),
            hasse_core::Error::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "hnp",
    version,
    about = "Abelian extensions of Q: Hasse norm principle, weak approximation and counting checks"
)]
pub struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output file, written atomically (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (each command has its own default)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory for cached enumerations
    #[arg(long, global = true, env = "HNP_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of search nodes per enumeration
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArg {
    /// Group, e.g. C2xC2 or C2xC4
    #[arg(long)]
    group: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List G-extensions with discriminant at most the bound (JSONL)
    Enumerate {
        #[command(flatten)]
        g: GroupArg,
        /// Discriminant bound, e.g. 1e6
        #[arg(long, value_parser = opts::bound)]
        bound: u128,
    },
    /// Proportion of extensions failing the norm principle, per bound (CSV)
    Density {
        #[command(flatten)]
        g: GroupArg,
        /// Comma-separated discriminant bounds
        #[arg(long, value_delimiter = ',', value_parser = opts::bound, required = true)]
        bounds: Vec<u128>,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 2)]
        j: usize,
        /// Prime set S for the Λ column (default: primes dividing |G|)
        #[arg(long = "S", value_parser = opts::prime_list)]
        s_primes: Option<PrimeList>,
    },
    /// Extensions with a given discriminant ramified only at given primes
    Find {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, value_parser = opts::bound)]
        disc: u128,
        /// Comma-separated primes allowed to ramify
        #[arg(long, value_parser = opts::prime_list)]
        ramified: PrimeList,
    },
    /// Compare the structured local transforms against brute force
    LocalFtCheck {
        #[command(flatten)]
        g: GroupArg,
        /// Primes and ranges, e.g. 3..97 or 5,7,11
        #[arg(long, value_parser = opts::prime_list, default_value = "3..97")]
        primes: PrimeList,
        /// Evaluation points, e.g. 0.7,0.5+0.5i
        #[arg(long = "s", value_delimiter = ',', value_parser = opts::complex, default_value = "0.3,0.7,1.1,0.5+0.5i")]
        s_values: Vec<Complex64>,
        #[arg(long, value_parser = opts::real, default_value = "1e-9")]
        tol: f64,
        /// Check only this many primes, drawn with --seed
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Both sides of the truncated Poisson identity
    Poisson {
        #[command(flatten)]
        g: GroupArg,
        /// Subgroup L, e.g. e1,e2^2 (default: <M, e1, ..., e_t^Q>)
        #[arg(long = "L")]
        l: Option<String>,
        /// Subgroup H (default: all of G)
        #[arg(long = "H")]
        h: Option<String>,
        /// Twist as modulus:images, e.g. 5:e2
        #[arg(long)]
        eta: Option<String>,
        #[arg(long = "s", value_parser = opts::real)]
        s: f64,
        /// Cut-off for the character sum
        #[arg(long = "X", value_parser = opts::bound)]
        x: u128,
        /// Cut-off for the Euler products
        #[arg(long = "P", value_parser = opts::bound)]
        p: u128,
        /// Relative discrepancy accepted when the tail estimates are exceeded
        #[arg(long, value_parser = opts::real, default_value = "0.02")]
        rel_tol: f64,
    },
    /// Normalised hom counts B^a (log B)^(ω-1) and their stability
    Tauber {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long, value_delimiter = ',', value_parser = opts::bound, required = true)]
        bounds: Vec<u128>,
        /// Exponent a (default 1/α(G))
        #[arg(long, value_parser = opts::real)]
        a: Option<f64>,
        /// Log power ω (default ν(G))
        #[arg(long, value_parser = opts::real)]
        omega: Option<f64>,
        #[arg(long, value_parser = opts::real, default_value = "0.25")]
        max_stability: f64,
    },
    /// Both sides of the Möbius inversion over the subgroup lattice
    MoebiusCheck {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long = "L")]
        l: Option<String>,
        #[arg(long, value_parser = opts::bound)]
        bound: u128,
    },
    /// Canonical form, ∧²G, subgroup count and W-partition
    GroupInfo {
        #[command(flatten)]
        g: GroupArg,
        #[arg(long = "L")]
        l: Option<String>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.global.workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    commands::dispatch(&cli.global, cli.command)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hnp: {e}");
            ExitCode::from(e.code())
        }
    }
}
