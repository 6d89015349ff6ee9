//! `qhecke`: command-line front end for the `quartic-hecke` library.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quartic_hecke::GaussInt;

#[derive(Parser, Debug)]
#[command(
    name = "qhecke",
    version,
    about = "Quartic Hecke L-values over Q(i) and their limiting distribution"
)]
pub struct Cli {
    /// TOML file with defaults; flags win on conflict.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quartic residue symbol (m/n)_4 for odd n.
    Symbol(SymbolArgs),
    /// Prime ideals of norm <= limit.
    Primes(PrimesArgs),
    /// Family members c with N(c) <= y.
    Family(FamilyArgs),
    /// Smoothed L(sigma, chi_c) and 2 ln|L|.
    Lvalue(LvalueArgs),
    /// Truncated Euler product phi_sigma(y).
    Phi(PhiArgs),
    /// Dirichlet-series form of the characteristic function.
    Mtilde(MtildeArgs),
    /// Density and distribution table from phi_sigma.
    Density(DensityArgs),
    /// Samples, limiting table and KS distance for one (sigma, Y).
    Experiment(ExperimentArgs),
    /// Quick invariant suite; exit code 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SymbolArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub m: GaussInt,
    #[arg(long, allow_hyphen_values = true)]
    pub n: GaussInt,
}

#[derive(Args, Debug)]
pub struct PrimesArgs {
    #[arg(long)]
    pub limit: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(long)]
    pub y: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LvalueArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<GaussInt>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Smoothing scale X (default max(N(c), 10^4)).
    #[arg(long)]
    pub cutoff_x: Option<f64>,
    #[arg(long)]
    pub zero_threshold: Option<f64>,
}

/// A y grid: an explicit list or `start:stop:step`.
#[derive(Args, Debug, Clone)]
pub struct YGrid {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ys: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "ys")]
    pub y_range: Option<String>,
}

#[derive(Args, Debug)]
pub struct PhiArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[command(flatten)]
    pub grid: YGrid,
    /// Prime ideals of norm <= P enter the product.
    #[arg(long)]
    pub prime_cutoff_p: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MtildeArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[command(flatten)]
    pub grid: YGrid,
    #[arg(long)]
    pub r_max: Option<u32>,
    #[arg(long)]
    pub ideal_norm_cap: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TableArgs {
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub prime_cutoff_p: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub h_t: Option<f64>,
    #[arg(long)]
    pub h_y: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Writes table.csv and table.json here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub table: TableArgs,
    /// Family members with N(c) <= Y are sampled.
    #[arg(long = "big-y")]
    pub big_y: Option<u64>,
    /// Also compare the weighted characteristic function at these y
    /// (extends the ensemble to the weight's effective support).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub char_fn_ys: Option<Vec<f64>>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
