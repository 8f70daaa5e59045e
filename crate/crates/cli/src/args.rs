use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fragmap",
    version,
    about = "Map a connected part of a fragmented query molecule onto a target"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum-cost mapping for one nlink, or a sweep over every nlink.
    Solve(SolveArgs),
    /// The optimum followed by maximally diverse near-optimal mappings.
    Diverse(DiverseArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Build an instance from fragment shape histograms.
    Score(ScoreArgs),
    /// Generate instance sets, sweep nlink on each and report statistics.
    Bench(BenchArgs),
    /// Brute-force reference solution for small instances.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Wall-clock limit per search, in milliseconds.
    #[arg(long, value_name = "MS")]
    pub time_limit: Option<u64>,
    /// Backtrack limit per search.
    #[arg(long, value_name = "MAX")]
    pub backtracks: Option<u64>,
    /// Matching-based filtering for the all-different constraint.
    #[arg(long)]
    pub strong_alldiff: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Write the report to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_name = "PATH")]
    pub instance: PathBuf,
    /// Number of query fragments to map; defaults to the instance's own.
    #[arg(long, conflicts_with = "sweep")]
    pub nlink: Option<usize>,
    /// Solve every nlink from 1 to the query size, sorted by cost per link.
    #[arg(long)]
    pub sweep: bool,
    /// Report every optimal mapping, not just one.
    #[arg(long)]
    pub all_optimal: bool,
    /// Pinned associations `q=t`, comma separated; `t` may be `-` for unmapped.
    #[arg(long, value_name = "q=t,...", value_delimiter = ',')]
    pub fix: Vec<String>,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("gap_spec").required(true).args(["gap", "gap_pct"])))]
pub struct DiverseArgs {
    #[arg(long, value_name = "PATH")]
    pub instance: PathBuf,
    #[arg(long)]
    pub nlink: Option<usize>,
    /// Number of solutions, the optimum included.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Allowed cost increase over the optimum, absolute.
    #[arg(long, value_name = "ABS")]
    pub gap: Option<i64>,
    /// Allowed cost increase over the optimum, in percent (rounded down).
    #[arg(long, value_name = "P")]
    pub gap_pct: Option<u32>,
    /// Let the diversity variable range up to |archive|·n_Q + c instead of n_Q + c.
    #[arg(long)]
    pub widen_yd: bool,
    #[arg(long, value_name = "q=t,...", value_delimiter = ',')]
    pub fix: Vec<String>,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub nq: usize,
    #[arg(long)]
    pub nt: usize,
    #[arg(long, default_value_t = 100)]
    pub smax: i64,
    #[arg(long, default_value_t = 101)]
    pub delta: i64,
    /// Overridden by the FRAGMAP_SEED environment variable when set.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub nlink: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// JSON list of `{"id": .., "bins": [32 integers]}`, one per query fragment.
    #[arg(long, value_name = "PATH")]
    pub query_hist: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub target_hist: PathBuf,
    /// Query tree edges as `a-b,c-d,...` (empty for a single fragment).
    #[arg(long, value_name = "EDGES", allow_hyphen_values = true)]
    pub query_edges: String,
    #[arg(long, value_name = "EDGES", allow_hyphen_values = true)]
    pub target_edges: String,
    #[arg(long)]
    pub delta: i64,
    #[arg(long)]
    pub nlink: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Number of instance sets.
    #[arg(long, default_value_t = 100)]
    pub sets: usize,
    #[arg(long, default_value_t = 5)]
    pub nq_min: usize,
    #[arg(long, default_value_t = 25)]
    pub nq_max: usize,
    /// Query sizes in a set go from nq-min to nq-max in this step.
    #[arg(long, default_value_t = 5)]
    pub nq_step: usize,
    #[arg(long, default_value_t = 50)]
    pub nt: usize,
    #[arg(long, default_value_t = 100)]
    pub smax: i64,
    #[arg(long, default_value_t = 101)]
    pub delta: i64,
    /// Overridden by the FRAGMAP_SEED environment variable when set.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write per-problem rows here instead of after the summary.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_name = "PATH")]
    pub instance: PathBuf,
    #[arg(long)]
    pub nlink: Option<usize>,
}
