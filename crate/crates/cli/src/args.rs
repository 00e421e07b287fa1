use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailscope::apen::RMode;
use tailscope::series::Frequency;

#[derive(Debug, Parser)]
#[command(name = "tailscope", version, about = "Volatility diagnostics for price series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize inputs and write the selected target series.
    Ingest(DataArgs),
    /// Tables of n, mean, SD, CV, ApEn and excess kurtosis for prices and log-returns.
    Report(DataArgs),
    /// Descriptive statistics of the target series.
    Stats(DataArgs),
    /// Approximate Entropy of the target series.
    Apen(DataArgs),
    /// Empirical mean excess curve with tail-shape classification.
    Mef(DataArgs),
    /// Maximum-to-sum ratio traces.
    Maxsum(DataArgs),
    /// Rolling-window statistic.
    Rolling(DataArgs),
    /// Write a seeded synthetic sample as a one-column CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Prices,
    Returns,
    AbsReturns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatisticArg {
    StdDev,
    CoeffVariation,
    Apen,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Input files as `ASSET=PATH`, or `PATH` to use the file stem as asset id.
    #[arg(required = true)]
    pub inputs: Vec<String>,

    /// Analysis frequencies (comma separated or repeated).
    #[arg(long, value_delimiter = ',', default_value = "daily", value_parser = parse_frequency)]
    pub frequency: Vec<Frequency>,

    /// Sampling frequency of the input price files.
    #[arg(long, default_value = "daily", value_parser = parse_frequency)]
    pub source_frequency: Frequency,

    #[arg(long, value_enum, default_value = "prices")]
    pub target: TargetArg,

    /// Window length in observations (default: 100 daily, 20 weekly, 3 monthly).
    #[arg(long)]
    pub window: Option<usize>,

    /// Statistic for `rolling`.
    #[arg(long, value_enum, default_value = "coeff-variation")]
    pub statistic: StatisticArg,

    /// ApEn pattern length.
    #[arg(long, default_value_t = 2)]
    pub m: usize,

    /// ApEn tolerance (fraction of SD when relative).
    #[arg(long, default_value_t = 0.2)]
    pub r: f64,

    #[arg(long, default_value = "relative", value_parser = parse_r_mode)]
    pub r_mode: RMode,

    /// Fraction of top order statistics discarded from mean excess curves.
    #[arg(long, default_value_t = 0.02)]
    pub trim: f64,

    /// Moment order for `maxsum`; all of 1..=4 when omitted.
    #[arg(long)]
    pub p: Option<u32>,

    /// Asset ids whose missing calendar days are forward-filled.
    #[arg(long, value_delimiter = ',')]
    pub fill_weekend: Vec<String>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,

    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gaussian,
    Exponential,
    Gpd,
    Lognormal,
    Pareto,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,

    #[arg(long, default_value_t = 100_000)]
    pub n: usize,

    #[arg(long, env = "TAILSCOPE_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub xi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub x_min: f64,

    /// Output file stem; defaults to the family name.
    #[arg(long)]
    pub asset: Option<String>,

    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn parse_frequency(s: &str) -> Result<Frequency, String> {
    s.parse()
}

fn parse_r_mode(s: &str) -> Result<RMode, String> {
    s.parse()
}
