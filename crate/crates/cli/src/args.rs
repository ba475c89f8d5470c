use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "snchol", version, about = "Supernodal sparse Cholesky: analysis, factorization, checks and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symbolic statistics: fill, supernodes, merging growth, blocks.
    Analyze(AnalyzeArgs),
    /// Factor one matrix with one method and report its counters.
    Factor(FactorArgs),
    /// Factor with every method and compare against the column oracle.
    Check(CheckArgs),
    /// Benchmark a list of matrices; writes CSV rows and a performance profile.
    Bench(BenchArgs),
}

/// Options shared by every subcommand that runs the analysis.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Fill-reducing ordering: natural, mindeg, or file:<path> (one 1-based
    /// index per line, giving the new position of each row).
    #[arg(long, default_value = "mindeg")]
    pub order: String,

    /// Reorder columns within supernodes (default).
    #[arg(long, overrides_with = "no_pr")]
    pub pr: bool,

    /// Keep the postordered column order inside supernodes.
    #[arg(long = "no-pr", overrides_with = "pr")]
    pub no_pr: bool,

    /// Merging stops before storage grows by more than this percentage;
    /// `off` disables merging.
    #[arg(long, default_value = "12.5", value_parser = parse_cap)]
    pub merge_cap: Cap,

    /// Seed for generated matrices (`gen:spd:...`).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl PipelineArgs {
    pub fn reorder(&self) -> bool {
        !self.no_pr
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cap(pub Option<f64>);

fn parse_cap(s: &str) -> Result<Cap, String> {
    if s.eq_ignore_ascii_case("off") {
        return Ok(Cap(None));
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(Cap(Some(v))),
        _ => Err(format!("expected a non-negative percentage or `off`, got {s:?}")),
    }
}

fn parse_odd(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v % 2 == 1 => Ok(v),
        _ => Err(format!("repeat count must be an odd positive integer, got {s:?}")),
    }
}

/// Kernel backend selection.
#[derive(Debug, Clone, Args)]
pub struct BackendArgs {
    /// Dense kernels: reference, or vendor (needs the `openblas` feature).
    #[arg(long, default_value = "reference")]
    pub backend: String,

    /// Threads for the vendor backend.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Matrix Market file, or gen:grid:NXxNY / gen:spd:N:DENSITY.
    pub matrix: String,

    #[command(flatten)]
    pub pipeline: PipelineArgs,

    /// List every supernode's columns and blocks.
    #[arg(long)]
    pub blocks: bool,
}

#[derive(Debug, Args)]
pub struct FactorArgs {
    pub matrix: String,

    /// ref, mf, ll, rl or rlb.
    #[arg(long, default_value = "rlb")]
    pub method: String,

    #[command(flatten)]
    pub backend: BackendArgs,

    #[command(flatten)]
    pub pipeline: PipelineArgs,

    #[arg(long, default_value = "1", value_parser = parse_odd)]
    pub repeats: usize,

    /// Also run the column oracle and report the largest relative deviation.
    #[arg(long)]
    pub check: bool,

    /// Right-hand side to solve with (whitespace-separated values); by
    /// default `b = A * ones`.
    #[arg(long)]
    pub rhs: Option<PathBuf>,

    /// Append the result as a CSV row (header written when the file is new).
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Print blocked kernel calls per (source, target) supernode pair.
    #[arg(long)]
    pub pairs: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub matrix: String,

    #[command(flatten)]
    pub backend: BackendArgs,

    #[command(flatten)]
    pub pipeline: PipelineArgs,

    /// Largest accepted relative deviation from the oracle.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// File listing one matrix source per line.
    pub list: PathBuf,

    /// Comma-separated methods, or `all`.
    #[arg(long, default_value = "mf,ll,rl,rlb")]
    pub method: String,

    #[command(flatten)]
    pub backend: BackendArgs,

    #[command(flatten)]
    pub pipeline: PipelineArgs,

    #[arg(long, default_value = "7", value_parser = parse_odd)]
    pub repeats: usize,

    /// Output CSV; standard output when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Performance-profile CSV; defaults to `<csv stem>.profile.csv` next to
    /// `--csv`.
    #[arg(long)]
    pub profile: Option<PathBuf>,

    #[arg(long, default_value_t = 2.0)]
    pub tau_max: f64,

    #[arg(long, default_value_t = 0.01)]
    pub tau_step: f64,
}
