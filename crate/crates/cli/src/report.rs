use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use benchrel::flash::{CalibrationConfig, Pooling, TierConfig};
use benchrel::resampling::{Anchors, Axis, BestModelConfig, ClusterCurveConfig, DiorConfig, Mode, Objective, PromptCompareConfig, SampleSize};
use benchrel::scoring::{Grouping, TiePolicy};
use benchrel::stats::ProportionCi;
use serde::Serialize;

use crate::args::ReportFormat;
use crate::CliError;

/// Every setting a run depends on. Fields a command does not use keep
/// their defaults, so any report can be replayed from this block alone.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<String>,
    /// Results of the models placed by `flash-rank`.
    pub candidates: Vec<String>,
    /// Evaluated or placed models; empty means all.
    pub models: Vec<String>,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub axis: Axis,
    pub mode: Mode,
    /// Modes compared by `prompt-compare`.
    pub modes: Vec<Mode>,
    pub sizes: Vec<SampleSize>,
    pub iterations: usize,
    pub seed: u64,
    pub objectives: Vec<Objective>,
    pub one_sided: bool,
    pub overrides: BTreeMap<String, usize>,
    pub top_removals: usize,
    pub ci: ProportionCi,
    pub cluster_sizes: Vec<usize>,
    pub anchors: Anchors,
    pub budget: usize,
    pub tiers: String,
    pub confidence: f64,
    pub pooling: Pooling,
    /// Resolution table read by `flash-rank` instead of calibrating.
    pub table: Option<String>,
    pub synth_case: Option<String>,
    pub synth_preset: String,
    pub synth_spec: Option<String>,
    pub newcomer_ranks: Vec<usize>,
    pub out: String,
    pub format: ReportFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let dior = DiorConfig::default();
        let best = BestModelConfig::default();
        let curve = ClusterCurveConfig::default();
        let prompts = PromptCompareConfig::default();
        let calib = CalibrationConfig::default();
        Self {
            command: String::new(),
            inputs: Vec::new(),
            candidates: Vec::new(),
            models: Vec::new(),
            grouping: dior.grouping,
            tie_policy: dior.tie_policy,
            axis: dior.axis,
            mode: dior.mode,
            modes: prompts.modes,
            sizes: vec![dior.size],
            iterations: dior.iterations,
            seed: dior.seed,
            objectives: Objective::ALL.to_vec(),
            one_sided: dior.one_sided,
            overrides: BTreeMap::new(),
            top_removals: best.top_removals,
            ci: best.ci,
            cluster_sizes: curve.cluster_sizes,
            anchors: curve.anchors,
            budget: prompts.budget,
            tiers: TierConfig::default().to_string(),
            confidence: calib.confidence,
            pooling: calib.pooling,
            table: None,
            synth_case: None,
            synth_preset: "default".into(),
            synth_spec: None,
            newcomer_ranks: Vec::new(),
            out: "reports".into(),
            format: ReportFormat::Json,
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    run_config: &'a RunConfig,
    result: &'a T,
}

/// One point of a plot-data table.
#[derive(Debug, Clone)]
pub struct PlotRow {
    pub series: String,
    pub x: String,
    pub y: f64,
    pub band: Option<(f64, f64)>,
}

impl PlotRow {
    pub fn new(series: impl Into<String>, x: impl ToString, y: f64) -> Self {
        Self { series: series.into(), x: x.to_string(), y, band: None }
    }

    pub fn band(mut self, lo: f64, hi: f64) -> Self {
        self.band = Some((lo, hi));
        self
    }
}

/// Writes the report and the plot table; returns both paths.
pub fn emit<T: Serialize>(
    config: &RunConfig,
    out: &Path,
    result: &T,
    plot: &[PlotRow],
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out)?;
    let report = Report {
        command: &config.command,
        version: env!("CARGO_PKG_VERSION"),
        run_config: config,
        result,
    };
    let mut text = match config.format {
        ReportFormat::Json => serde_json::to_string_pretty(&report)?,
        ReportFormat::JsonCompact => serde_json::to_string(&report)?,
    };
    text.push('\n');
    let report_path = out.join(format!("{}.json", config.command));
    fs::write(&report_path, text)?;

    let plot_path = out.join(format!("{}_plot.csv", config.command));
    let mut w = csv::Writer::from_path(&plot_path)?;
    w.write_record(["series", "x", "y", "band_lo", "band_hi"])?;
    for row in plot {
        let (lo, hi) = match row.band {
            Some((lo, hi)) => (lo.to_string(), hi.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([row.series.as_str(), &row.x, &row.y.to_string(), &lo, &hi])?;
    }
    w.flush()?;
    Ok(vec![report_path, plot_path])
}
