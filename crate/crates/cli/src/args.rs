use std::path::PathBuf;

use benchrel::flash::Pooling;
use benchrel::resampling::{Anchors, Axis, Mode, SampleSize};
use benchrel::scoring::{Grouping, TiePolicy};
use benchrel::stats::ProportionCi;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "benchrel", version, about = "Benchmark aggregation and reliability analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize a results file and list coverage gaps.
    Validate(DataArgs),
    /// Mean win rate of every model.
    Mwr(ScoreArgs),
    /// Leaderboard order by mean win rate.
    Rank(ScoreArgs),
    /// Reliability of benchmark outcomes under a resampled design decision.
    Dior(DiorArgs),
    /// How often the runner-up overtakes the leader.
    BestModel(BestModelArgs),
    /// Rank-switch rate of model clusters against examples evaluated.
    ClusterCurve(CurveArgs),
    /// Compare ways of pairing examples with prompts at a fixed budget.
    PromptCompare(PromptArgs),
    /// Kendall τ between the rankings of standalone subscenarios.
    Correlations(DataArgs),
    /// Rank resolution achieved by each sample size.
    Calibrate(CalibrateArgs),
    /// Place new models on the leaderboard with a coarse-to-fine tournament.
    FlashRank(FlashArgs),
    /// Generate a synthetic benchmark or a worked example.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupingArg {
    #[value(name = "by_scenario", alias = "by-scenario")]
    ByScenario,
    #[value(name = "by_subscenario", alias = "by-subscenario")]
    BySubscenario,
}

impl From<GroupingArg> for Grouping {
    fn from(g: GroupingArg) -> Self {
        match g {
            GroupingArg::ByScenario => Grouping::ByScenario,
            GroupingArg::BySubscenario => Grouping::BySubscenario,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Strict,
    Half,
}

impl From<TieArg> for TiePolicy {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Strict => TiePolicy::Strict,
            TieArg::Half => TiePolicy::Half,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Scenarios,
    Subscenarios,
    Examples,
    #[value(name = "prompt_pairing", alias = "prompt-pairing")]
    PromptPairing,
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Scenarios => Axis::Scenarios,
            AxisArg::Subscenarios => Axis::Subscenarios,
            AxisArg::Examples => Axis::Examples,
            AxisArg::PromptPairing => Axis::PromptPairing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bootstrap,
    Subsample,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Bootstrap => Mode::Bootstrap,
            ModeArg::Subsample => Mode::Subsample,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CiArg {
    Normal,
    #[value(name = "clopper_pearson", alias = "clopper-pearson")]
    ClopperPearson,
}

impl From<CiArg> for ProportionCi {
    fn from(c: CiArg) -> Self {
        match c {
            CiArg::Normal => ProportionCi::Normal,
            CiArg::ClopperPearson => ProportionCi::ClopperPearson,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolingArg {
    Global,
    #[value(name = "per_tier", alias = "per-tier")]
    PerTier,
}

impl From<PoolingArg> for Pooling {
    fn from(p: PoolingArg) -> Self {
        match p {
            PoolingArg::Global => Pooling::Global,
            PoolingArg::PerTier => Pooling::PerTier,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    /// Indented JSON.
    Json,
    /// Single-line JSON.
    #[value(name = "json_compact", alias = "json-compact")]
    JsonCompact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Default,
    Reference,
    Heterogeneous,
}

/// Where reports go and how they are written.
#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report directory.
    #[arg(long, env = "BENCHREL_OUT", default_value = "reports")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormat,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Print nothing on success.
    #[arg(long, short = 'q')]
    pub quiet: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Results file (.csv or .jsonl); repeat to merge several.
    #[arg(long = "input", short = 'i', required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long = "tie-policy", value_enum, default_value = "strict")]
    pub tie_policy: TieArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScoringArgs {
    /// Results file (.csv or .jsonl); repeat to merge several.
    #[arg(long = "input", short = 'i', required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "by_scenario")]
    pub grouping: GroupingArg,
    #[arg(long = "tie-policy", value_enum, default_value = "strict")]
    pub tie_policy: TieArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Restrict the evaluated set to these models; repeatable.
    #[arg(long = "model")]
    pub models: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ResampleArgs {
    #[arg(long, value_enum, default_value = "examples")]
    pub axis: AxisArg,
    #[arg(long, value_enum, default_value = "bootstrap")]
    pub mode: ModeArg,
    /// Resampling iterations (at least 100).
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DiorArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub resample: ResampleArgs,
    /// Instantiation size: a count or `max`; repeat for several.
    #[arg(long = "size", default_value = "max")]
    pub sizes: Vec<String>,
    /// kendall, weighted_kendall, best_model or model_quality; repeatable.
    /// Defaults to all four.
    #[arg(long = "objective")]
    pub objectives: Vec<String>,
    /// Report the 5th percentile instead of the 2.5th.
    #[arg(long)]
    pub one_sided: bool,
    /// Examples drawn from one subscenario, as `name=count`; repeatable.
    #[arg(long = "override")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct BestModelArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub resample: ResampleArgs,
    #[arg(long, default_value = "max")]
    pub size: String,
    /// Leaders removed one after another.
    #[arg(long, default_value_t = 5)]
    pub top_removals: usize,
    #[arg(long, value_enum, default_value = "normal")]
    pub ci: CiArg,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[arg(long, value_enum, default_value = "bootstrap")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Examples per scenario; repeatable.
    #[arg(long = "size", default_values = ["20", "50", "200", "max"])]
    pub sizes: Vec<String>,
    /// Repeatable.
    #[arg(long = "cluster-size", default_values_t = [2usize, 3, 5, 10, 20])]
    pub cluster_sizes: Vec<usize>,
    /// `all` or `top:K`.
    #[arg(long, default_value = "all", value_parser = parse_anchors)]
    pub anchors: Anchors,
    #[arg(long = "override")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct PromptArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Calls per subscenario.
    #[arg(long, default_value_t = 100)]
    pub budget: usize,
    /// Repeatable; defaults to both.
    #[arg(long = "mode", value_enum)]
    pub modes: Vec<ModeArg>,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrationArgs {
    /// Examples per scenario; repeatable, strictly increasing.
    #[arg(long = "size", default_values = ["20", "50", "200", "1000", "max"])]
    pub sizes: Vec<String>,
    /// Tier bands and precisions, e.g. `1:full,2-4:1,5-9:2,10-19:3,20+:4`.
    #[arg(long, default_value = "1:full,2-4:1,5-9:2,10-19:3,20+:4")]
    pub tiers: String,
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
    #[arg(long, value_enum, default_value = "global")]
    pub pooling: PoolingArg,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub scoring: ScoringArgs,
    #[command(flatten)]
    pub calibration: CalibrationArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct FlashArgs {
    /// Reference results; repeat to merge several.
    #[command(flatten)]
    pub scoring: ScoringArgs,
    /// Results of the models to place.
    #[arg(long = "candidates", required = true)]
    pub candidates: Vec<PathBuf>,
    /// Candidate models to place; defaults to all of them.
    #[arg(long = "model")]
    pub models: Vec<String>,
    /// A report written by `calibrate`; calibrates inline when absent.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[command(flatten)]
    pub calibration: CalibrationArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Worked example: add_model, combine_datasets or partial_report.
    #[arg(long, conflicts_with_all = ["preset", "spec"])]
    pub case: Option<String>,
    #[arg(long, value_enum, default_value = "default", conflicts_with = "spec")]
    pub preset: PresetArg,
    /// Generator parameters as TOML.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Extra models placed at these latent ranks (reference preset only).
    #[arg(long = "newcomer-rank")]
    pub newcomer_ranks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_anchors(s: &str) -> Result<Anchors, String> {
    if s == "all" {
        return Ok(Anchors::All);
    }
    s.strip_prefix("top:")
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k > 0)
        .map(Anchors::Top)
        .ok_or_else(|| format!("expected `all` or `top:K` with K >= 1, got {s:?}"))
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Mwr(_) => "mwr",
            Command::Rank(_) => "rank",
            Command::Dior(_) => "dior",
            Command::BestModel(_) => "best-model",
            Command::ClusterCurve(_) => "cluster-curve",
            Command::PromptCompare(_) => "prompt-compare",
            Command::Correlations(_) => "correlations",
            Command::Calibrate(_) => "calibrate",
            Command::FlashRank(_) => "flash-rank",
            Command::Synth(_) => "synth",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Validate(a) | Command::Correlations(a) => &a.output,
            Command::Mwr(a) | Command::Rank(a) => &a.scoring.output,
            Command::Dior(a) => &a.scoring.output,
            Command::BestModel(a) => &a.scoring.output,
            Command::ClusterCurve(a) => &a.scoring.output,
            Command::PromptCompare(a) => &a.scoring.output,
            Command::Calibrate(a) => &a.scoring.output,
            Command::FlashRank(a) => &a.scoring.output,
            Command::Synth(a) => &a.output,
        }
    }
}

/// Parses a size flag, rejecting zero.
pub fn parse_size(flag: &str, s: &str) -> Result<SampleSize, crate::CliError> {
    let size: SampleSize = s.parse().map_err(|e: String| crate::CliError::usage(flag, s, &e))?;
    if size == SampleSize::Count(0) {
        return Err(crate::CliError::usage(flag, s, "size must be at least 1"));
    }
    Ok(size)
}
