use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use seqforge::GapParity;

#[derive(Debug, Parser)]
#[command(name = "seqforge", version, about = "Count constrained subsets and work with the sequences they form")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format [default: table]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Largest n the exhaustive enumerator accepts [default: 30]
    #[arg(long, global = true, env = "SEQFORGE_ENUM_LIMIT")]
    pub enum_limit: Option<u32>,

    /// TOML file with defaults for the options above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
    Bfile,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count subsets of {1..n} satisfying a condition
    Count(CountArgs),
    /// Emit terms of a sequence family
    Seq(SeqArgs),
    /// Check identities over a range
    Verify(VerifyArgs),
    /// Find the minimal recurrence of a count sequence
    Discover(DiscoverArgs),
    /// List the subsets of {1..n} satisfying a condition
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConditionArgs {
    /// Require min S >= alpha * |S|
    #[arg(long)]
    pub alpha: Option<u32>,

    /// Require consecutive elements at least beta apart
    #[arg(long)]
    pub beta: Option<u32>,

    /// Require every gap to be odd or every gap to be even
    #[arg(long, value_parser = parse_parity, default_value = "any")]
    pub gap_parity: GapParity,

    /// Require at least this many elements
    #[arg(long, default_value_t = 0)]
    pub min_size: u32,

    /// Require the largest element to be exactly this value
    #[arg(long)]
    pub forced_max: Option<u32>,
}

fn parse_parity(s: &str) -> Result<GapParity, String> {
    s.parse().map_err(|e: seqforge::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum CountEngine {
    /// Enumerate when n is within the limit, otherwise use a formula
    #[default]
    Auto,
    Oracle,
    Recurrence,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: u32,

    #[command(flatten)]
    pub condition: ConditionArgs,

    #[arg(long, value_enum, default_value_t)]
    pub engine: CountEngine,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum SeqEngine {
    /// Generate every term from the family's own rule
    #[default]
    Direct,
    /// Evaluate each term independently from the family's linear recurrence
    Fast,
}

#[derive(Debug, Args)]
pub struct SeqArgs {
    /// sz, fib, H, genfib, genk, genh, oddgap-contain, oddgap-total,
    /// evengap-contain, evengap-total or minsize-oddgap
    #[arg(long)]
    pub family: String,

    #[arg(long)]
    pub alpha: Option<u32>,

    #[arg(long)]
    pub beta: Option<u32>,

    /// Order of the generalized Fibonacci families
    #[arg(long)]
    pub n: Option<u32>,

    /// Minimum size for minsize-oddgap
    #[arg(long)]
    pub k: Option<u32>,

    /// First index [default: the family's first index]
    #[arg(long)]
    pub from: Option<i64>,

    /// Last index
    #[arg(long)]
    pub to: i64,

    #[arg(long, value_enum, default_value_t)]
    pub engine: SeqEngine,

    /// Reduce terms modulo this value
    #[arg(long)]
    pub modulus: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// fib-h, gen-sum, gen-shift, min2-oddgap, schreier-zeckendorf, odd-gap,
    /// even-gap, bijection, ratio or all
    #[arg(long)]
    pub id: String,

    /// Upper end of the checked range
    #[arg(long)]
    pub to: Option<u32>,

    /// Generalized Fibonacci order for gen-sum and gen-shift [default: 2..=8]
    #[arg(long)]
    pub n: Option<u32>,

    /// Upper end of the enumeration cross-check for min2-oddgap
    #[arg(long)]
    pub oracle_to: Option<u32>,

    /// Largest alpha and beta for schreier-zeckendorf and bijection
    #[arg(long, default_value_t = 3)]
    pub param_max: u32,

    /// For ratio: require 1 - r(to) below this value, e.g. 1e-3
    #[arg(long)]
    pub threshold: Option<String>,
}

#[derive(Debug, Args)]
pub struct DiscoverArgs {
    #[arg(long, required_unless_present = "terms")]
    pub alpha: Option<u32>,

    #[arg(long, required_unless_present = "terms")]
    pub beta: Option<u32>,

    /// Number of tail terms to probe [default: 8 * (alpha + beta)]
    #[arg(long)]
    pub probe: Option<usize>,

    /// Exit with status 1 unless this order is found
    #[arg(long)]
    pub expect_order: Option<usize>,

    /// Run on these comma-separated terms instead of a count sequence
    #[arg(long, conflicts_with_all = ["alpha", "beta", "probe"], value_delimiter = ',')]
    pub terms: Option<Vec<String>>,

    /// Index of the first of --terms
    #[arg(long, default_value_t = 0, requires = "terms")]
    pub offset: i64,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: u32,

    #[command(flatten)]
    pub condition: ConditionArgs,
}

/// Defaults read from `--config`. Explicit flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub enum_limit: Option<u32>,
}

/// Global options after merging flags, environment and config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub enum_limit: u32,
}

impl RunConfig {
    pub fn resolve(global: &GlobalArgs, file: FileConfig) -> RunConfig {
        RunConfig {
            format: global.format.or(file.format).unwrap_or(Format::Table),
            output: global.output.clone().or(file.output),
            enum_limit: global
                .enum_limit
                .or(file.enum_limit)
                .unwrap_or(seqforge::subset::DEFAULT_ENUM_LIMIT),
        }
    }
}
