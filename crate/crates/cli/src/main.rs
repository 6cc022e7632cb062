//! `schwarz`: verification suites, Koebe closed forms, sharp-constant tables,
//! Schwarzian series dumps and two-sided multiplier-norm bounds.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage or
//! domain errors.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "schwarz", version, about = "Higher-order Schwarzian derivatives and multiplier-norm bounds")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run invariant suites.
    Verify(VerifyArgs),
    /// Closed form of S_κ^{[p,q]} for the Koebe function.
    Koebe(KoebeArgs),
    /// Sharp constants next to the classical bounds.
    Table(TableArgs),
    /// Taylor coefficients of S_f^{[p,q]} for a catalog or custom function.
    Schwarzian(SchwarzianArgs),
    /// Certified lower bound and exact upper bound for ‖S_κ^{[p,q]}‖.
    Bound(BoundArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run: exact, series, schwarzian, norms, multiplier or all.
    #[arg(value_delimiter = ',', default_value = "all")]
    pub suites: Vec<String>,
    /// Series order for the exact identity checks.
    #[arg(long, default_value_t = 60)]
    pub order: usize,
}

#[derive(Debug, Args)]
pub struct KoebeArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    /// Evaluate at a point given as `re,im` (rationals or decimals).
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Option<String>,
    /// Print the Taylor series through this order.
    #[arg(long)]
    pub series: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated rational α values.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alphas: String,
    /// Comma-separated `p:q` pairs.
    #[arg(long, default_value = "1:1,2:1,1:2,2:2,3:1,3:2,3:3")]
    pub pq: String,
}

#[derive(Debug, Args)]
pub struct SchwarzianArgs {
    /// Catalog function name, e.g. `koebe`, `strip` or `rotated_koebe:0.5`.
    #[arg(long, conflicts_with = "coeffs", required_unless_present = "coeffs")]
    pub function: Option<String>,
    /// JSON file with `{"label": ..., "coefficients": [...]}`.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long, default_value_t = 20)]
    pub order: usize,
    /// Also print the Grunsky coefficients γ_{n,k} for n, k ≤ N.
    #[arg(long)]
    pub grunsky: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    /// Rational α > −1.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub alpha: String,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub budget: f64,
    /// Rayleigh schedule as `r:N` pairs, e.g. `0.9:250,0.99:1000`.
    #[arg(long)]
    pub schedule: Option<String>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<schwarz_core::Error> for Failure {
    fn from(e: schwarz_core::Error) -> Self {
        Self::usage(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let (rendered, code) = match &cli.command {
        Command::Verify(a) => verify::run(a)?,
        Command::Koebe(a) => (commands::koebe(a)?, 0),
        Command::Table(a) => (commands::table(a)?, 0),
        Command::Schwarzian(a) => (commands::schwarzian(a)?, 0),
        Command::Bound(a) => (commands::bound(a)?, 0),
    };
    let text = rendered.render(cli.format).map_err(Failure::usage)?;
    output::emit(&text, cli.out.as_deref()).map_err(|e| Failure::usage(format!("cannot write output: {e}")))?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
