//! `recon`: construct, verify, decode and bound balanced reconstruction codes.
//!
//! Exit codes: 0 success or certified, 1 property violated or not certified,
//! 2 usage error, 3 budget refusal.

mod commands;
mod manifest;

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use recon_core::words::DEFAULT_ENUMERATION_BUDGET;
use recon_core::Error as CoreError;

pub const BUDGET_ENV: &str = "RECON_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "recon", version, about = "Balanced reconstruction codes for single-edit channels")]
struct Cli {
    /// Worker threads for pair scans and enumeration filters.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    /// Write the run manifest here instead of next to `--output`.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Build a code and write it in the code file format.
    Construct(ConstructArgs),
    /// Certify a code file as an (n, N; B)-reconstruction code.
    Verify(VerifyArgs),
    /// Reconstruct a codeword from a file of distinct reads.
    Decode(DecodeArgs),
    /// Largest reconstruction code in U_n, exact or greedy.
    Maxcode(MaxcodeArgs),
    /// Closed-form bound table or redundancy table over a range of n.
    Bounds(BoundsArgs),
    /// Exhaustive check of the intersection characterization over U_n.
    Props(PropsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Balanced,
    Bvt,
    Blt,
    R2b,
    C2,
    D2,
    E2,
    Parity,
}

/// A residue or `best`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residue {
    Best,
    Value(usize),
}

impl Serialize for Residue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residue::Best => s.serialize_str("best"),
            Residue::Value(r) => s.serialize_u64(*r as u64),
        }
    }
}

impl std::str::FromStr for Residue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("best") {
            return Ok(Residue::Best);
        }
        s.parse()
            .map(Residue::Value)
            .map_err(|_| format!("expected a residue or `best`, got {s:?}"))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    /// Residue `a` for bvt, blt and parity.
    #[arg(long)]
    pub a: Option<Residue>,
    /// Residue `t` for c2, d2 and e2.
    #[arg(long)]
    pub t: Option<Residue>,
    /// Period bound `P` for c2, d2 and e2.
    #[arg(long)]
    pub p: Option<usize>,
    /// Period `l` for r2b.
    #[arg(long)]
    pub l: Option<usize>,
    /// Maximum low-period subword length `m` for r2b.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: std::path::PathBuf,
    #[arg(long)]
    pub channel: recon_core::Channel,
    #[arg(long = "N", visible_alias = "reads-needed")]
    pub reads: usize,
    /// Scan every pair, bypassing the structural filter.
    #[arg(long)]
    pub no_filter: bool,
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: std::path::PathBuf,
    #[arg(long)]
    pub channel: recon_core::Channel,
    /// One read per line; blank lines and `#` comments are skipped.
    #[arg(long)]
    pub reads: std::path::PathBuf,
    /// The N the code is certified for; defaults to the number of reads.
    #[arg(long = "N")]
    pub reads_needed: Option<usize>,
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct MaxcodeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub channel: recon_core::Channel,
    #[arg(long = "N")]
    pub reads: usize,
    /// Branch-and-bound maximum independent set (default).
    #[arg(long, conflicts_with = "greedy")]
    pub exact: bool,
    /// Lexicographic first-fit code.
    #[arg(long)]
    pub greedy: bool,
    /// Largest conflict graph the exact search accepts.
    #[arg(long, default_value_t = recon_core::verifier::DEFAULT_EXACT_VERTEX_BUDGET)]
    pub max_vertices: usize,
    /// Also write the optimal code in the code file format.
    #[arg(long)]
    pub code_out: Option<std::path::PathBuf>,
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Bounds,
    Redundancy,
}

/// Even lengths given as `a..b` (inclusive) or a comma list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Lengths(pub Vec<usize>);

impl std::str::FromStr for Lengths {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("{t:?} is not a length"))
        };
        let ns: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            (lo..=hi).filter(|n| n % 2 == 0).collect()
        } else {
            s.split(',').map(num).collect::<Result<_, _>>()?
        };
        if ns.is_empty() {
            return Err(format!("{s:?} contains no even length"));
        }
        Ok(Lengths(ns))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Lengths: `8..14` (odd values skipped) or `8,10,12`.
    #[arg(long)]
    pub n: Lengths,
    #[arg(long, default_value = "D")]
    pub channel: recon_core::Channel,
    #[arg(long = "N", default_value_t = 1)]
    pub reads: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Table::Bounds)]
    pub table: Table,
    /// Largest |U_n| for the exact extremal column of the bounds table.
    #[arg(long, default_value_t = 70)]
    pub exact_limit: usize,
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct PropsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<std::path::PathBuf>,
}

impl Command {
    fn output(&self) -> Option<&std::path::Path> {
        match self {
            Command::Construct(a) => a.output.as_deref(),
            Command::Verify(a) => a.output.as_deref(),
            Command::Decode(a) => a.output.as_deref(),
            Command::Maxcode(a) => a.output.as_deref(),
            Command::Bounds(a) => a.output.as_deref(),
            Command::Props(a) => a.output.as_deref(),
        }
    }
}

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Budget(m) => write!(f, "refused: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::BudgetExceeded { .. } | CoreError::SearchBudgetExceeded { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Primary output of a command and whether the checked property held.
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

/// Enumeration budget from `RECON_BUDGET`, else the library default.
pub fn budget_from_env() -> Result<u128, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw
            .trim()
            .replace('_', "")
            .parse::<u128>()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={raw:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_BUDGET),
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let budget = budget_from_env()?;
    let start = std::time::Instant::now();
    let outcome = commands::dispatch(&cli.command, budget)?;
    let wall = start.elapsed();

    match cli.command.output() {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    let manifest_path = cli.manifest.clone().or_else(|| {
        cli.command.output().map(|p| {
            let mut s = p.as_os_str().to_owned();
            s.push(".manifest.json");
            s.into()
        })
    });
    if let Some(path) = manifest_path {
        let m = manifest::RunManifest::new(&cli.command, cli.threads, budget, wall, &outcome.text);
        std::fs::write(path, m.to_json())?;
    }
    Ok(outcome.success)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
