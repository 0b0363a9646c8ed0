use std::time::Duration;

use clap::builder::TypedValueParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dimers::asymptotics::DEFAULT_PRECISION_BITS;
use dimers::graphs::DEFAULT_BUILD_CAP;
use dimers::oracle::Budget;
use dimers::recursion::DEFAULT_EXACT_CAP;
use dimers::Family;

/// Exact matching counts and entropy constants for Tower of Hanoi and
/// Sierpinski-type graphs.
#[derive(Debug, Parser)]
#[command(name = "dimers", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph instance and print it.
    Build(BuildArgs),
    /// Count matchings of an explicit instance by outmost-vertex class.
    Count(CountArgs),
    /// Iterate the exact boundary-count recursion.
    Recurse(RecurseArgs),
    /// Print the ratios alpha, beta, gamma by stage.
    Ratios(RatiosArgs),
    /// Entropy per vertex and per edge with rigorous bounds.
    Entropy(EntropyArgs),
    /// Check every tabulated value and structural property.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PrecisionArgs {
    /// Starting working precision in bits; escalated automatically when too low.
    #[arg(
        long,
        env = "DIMERS_PRECISION_BITS",
        default_value_t = DEFAULT_PRECISION_BITS,
        value_parser = clap::value_parser!(u32).range(64..=65536).map(|b| b as usize)
    )]
    pub precision_bits: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Step ceiling for the direct count.
    #[arg(long, default_value_t = Budget::default().max_steps, value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_steps: u64,
    /// Wall-clock limit for the direct count.
    #[arg(long)]
    pub oracle_seconds: Option<f64>,
    /// Count the eight outmost classes on separate threads.
    #[arg(long)]
    pub parallel: bool,
}

impl OracleArgs {
    pub fn budget(&self) -> Budget {
        Budget {
            max_steps: self.oracle_steps,
            max_duration: self
                .oracle_seconds
                .filter(|s| *s > 0.0)
                .map(Duration::from_secs_f64),
        }
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// hanoi | sierpx
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
    /// Largest stage that may be materialized.
    #[arg(long, default_value_t = DEFAULT_BUILD_CAP)]
    pub build_cap: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// hanoi | sierpx
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RecurseArgs {
    /// hanoi | sierpx
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: u32,
    /// Largest stage the exact recursion may reach.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RatiosArgs {
    /// hanoi | sierpx
    #[arg(long)]
    pub family: Family,
    /// Last stage printed.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Decimal places, rounded.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..=1000))]
    pub digits: u32,
    /// Iterate the ratio map in floating point instead of dividing exact counts.
    #[arg(long)]
    pub float: bool,
    /// Also enclose the common limit to `--digits` places.
    #[arg(long)]
    pub limit: bool,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: u32,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// hanoi | sierpx
    #[arg(long)]
    pub family: Family,
    /// Certified decimal places.
    #[arg(long, default_value_t = 19, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,
    /// Use this stage instead of searching for the smallest sufficient one.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    pub exact_cap: u32,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to one family (hanoi | sierpx); both by default.
    #[arg(long)]
    pub family: Option<Family>,
    /// Compare against values exactly as tabulated, ignoring corrections.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub oracle: OracleArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
