use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use benchrel::data::{load_results, validate, write_delimited, BenchmarkData, Format};
use benchrel::flash::{
    calibrate_resolution, flash_rank, CalibrationConfig, FlashConfig, FlashRankResult,
    ResolutionTable, TableProvider, TierConfig,
};
use benchrel::resampling::{
    best_model_error_rate, cluster_error_curve, dior_many, prompt_strategy_compare,
    subscenario_rank_correlations, BestModelConfig, ClusterCurveConfig, DiorConfig, Objective,
    PromptCompareConfig, SampleSize,
};
use benchrel::scoring::{mean_win_rate, ranking, ScoreEntry, Selection};
use benchrel::stats;
use benchrel::synth::{appendix_case, generate, SynthSpec};
use serde::Serialize;

use crate::args::*;
use crate::report::{emit, PlotRow, RunConfig};
use crate::CliError;

const MIN_ITERATIONS: usize = 100;

pub fn execute(command: &Command) -> Result<Vec<PathBuf>, CliError> {
    let threads = command.output().threads;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("invalid value '{threads}' for '--threads': {e}")))?;
    pool.install(|| match command {
        Command::Validate(a) => cmd_validate(a),
        Command::Mwr(a) => cmd_mwr(a, false),
        Command::Rank(a) => cmd_mwr(a, true),
        Command::Dior(a) => cmd_dior(a),
        Command::BestModel(a) => cmd_best_model(a),
        Command::ClusterCurve(a) => cmd_curve(a),
        Command::PromptCompare(a) => cmd_prompts(a),
        Command::Correlations(a) => cmd_correlations(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::FlashRank(a) => cmd_flash(a),
        Command::Synth(a) => cmd_synth(a),
    })
}

fn paths(ps: &[PathBuf]) -> Vec<String> {
    ps.iter().map(|p| p.display().to_string()).collect()
}

/// Loads and merges every input into one dataset.
fn load(inputs: &[PathBuf]) -> Result<BenchmarkData, CliError> {
    let mut sets = inputs
        .iter()
        .map(|p| load_results(p, Format::from_path(p)))
        .collect::<Result<Vec<_>, _>>()?;
    if sets.len() == 1 {
        return Ok(sets.remove(0));
    }
    let records = sets.iter().flat_map(|d| d.records()).collect();
    Ok(BenchmarkData::from_records(records)?)
}

fn base(name: &str, out: &OutputArgs) -> RunConfig {
    RunConfig {
        command: name.into(),
        out: out.out.display().to_string(),
        format: out.format,
        ..RunConfig::default()
    }
}

fn scoring_config(name: &str, a: &ScoringArgs) -> RunConfig {
    RunConfig {
        inputs: paths(&a.inputs),
        grouping: a.grouping.into(),
        tie_policy: a.tie_policy.into(),
        ..base(name, &a.output)
    }
}

fn check_iterations(n: usize) -> Result<(), CliError> {
    if n < MIN_ITERATIONS {
        return Err(CliError::usage("--iterations", &n.to_string(), "at least 100 iterations are required"));
    }
    Ok(())
}

fn sizes(flag: &str, raw: &[String]) -> Result<Vec<SampleSize>, CliError> {
    raw.iter().map(|s| parse_size(flag, s)).collect()
}

fn overrides(raw: &[String]) -> Result<BTreeMap<String, usize>, CliError> {
    raw.iter()
        .map(|s| {
            let bad = || CliError::usage("--override", s, "expected name=count with count >= 1");
            let (name, n) = s.split_once('=').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            if n == 0 || name.is_empty() {
                return Err(bad());
            }
            Ok((name.to_string(), n))
        })
        .collect()
}

#[derive(Serialize)]
struct ValidateResult {
    models: Vec<String>,
    clean: bool,
    #[serde(flatten)]
    report: benchrel::data::ValidationReport,
}

fn cmd_validate(a: &DataArgs) -> Result<Vec<PathBuf>, CliError> {
    let config = RunConfig { inputs: paths(&a.inputs), tie_policy: a.tie_policy.into(), ..base("validate", &a.output) };
    let data = load(&a.inputs)?;
    let report = validate(&data);
    let mut counts = vec![0usize; data.n_models()];
    for r in data.records() {
        counts[data.model_index(&r.model).expect("model of its own record")] += 1;
    }
    let mut plot: Vec<PlotRow> =
        data.models().iter().zip(&counts).map(|(m, &c)| PlotRow::new("records", m, c as f64)).collect();
    for m in data.models() {
        let missing = report.missing.iter().filter(|p| &p.model == m).count();
        plot.push(PlotRow::new("missing_subscenarios", m, missing as f64));
    }
    let result = ValidateResult { models: data.models().to_vec(), clean: report.is_clean(), report };
    emit(&config, &a.output.out, &result, &plot)
}

#[derive(Serialize)]
struct MwrResult {
    entries: Vec<ScoreEntry>,
}

#[derive(Serialize)]
struct RankRow {
    rank: usize,
    #[serde(flatten)]
    entry: ScoreEntry,
}

#[derive(Serialize)]
struct RankResult {
    ranking: Vec<RankRow>,
    tie_break_applied: bool,
}

fn cmd_mwr(a: &ScoreArgs, rank: bool) -> Result<Vec<PathBuf>, CliError> {
    let name = if rank { "rank" } else { "mwr" };
    let config = RunConfig { models: a.models.clone(), ..scoring_config(name, &a.scoring) };
    let data = load(&a.scoring.inputs)?;
    let models: Vec<String> = if a.models.is_empty() { data.models().to_vec() } else { a.models.clone() };
    let table = mean_win_rate(&data, &models, config.grouping, &Selection::full(&data), config.tie_policy)?;
    let entries = table.entries();
    let quiet = a.scoring.output.quiet;
    if !rank {
        if !quiet {
            for e in &entries {
                println!("{}\t{}\t{}", e.model, e.mwr, e.exact.as_deref().unwrap_or("-"));
            }
        }
        let plot: Vec<PlotRow> = entries.iter().map(|e| PlotRow::new("mwr", &e.model, e.mwr)).collect();
        return emit(&config, &a.scoring.output.out, &MwrResult { entries }, &plot);
    }
    let r = ranking(&table);
    let rows: Vec<RankRow> = r
        .order_idx
        .iter()
        .enumerate()
        .map(|(p, &i)| RankRow { rank: p + 1, entry: entries[i].clone() })
        .collect();
    if !quiet {
        for row in &rows {
            println!("{}\t{}\t{}", row.rank, row.entry.model, row.entry.mwr);
        }
    }
    let plot: Vec<PlotRow> = rows.iter().map(|r| PlotRow::new("rank", &r.entry.model, r.rank as f64)).collect();
    let result = RankResult { ranking: rows, tie_break_applied: r.tie_break_applied };
    emit(&config, &a.scoring.output.out, &result, &plot)
}

#[derive(Serialize)]
struct DiorRow {
    size: SampleSize,
    objective: Objective,
    dior: f64,
    point_estimate: f64,
    upper: f64,
}

fn cmd_dior(a: &DiorArgs) -> Result<Vec<PathBuf>, CliError> {
    check_iterations(a.resample.iterations)?;
    let objectives: Vec<Objective> = if a.objectives.is_empty() {
        Objective::ALL.to_vec()
    } else {
        a.objectives
            .iter()
            .map(|o| o.parse().map_err(|e: benchrel::resampling::ResampleError| CliError::usage("--objective", o, &e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let config = RunConfig {
        axis: a.resample.axis.into(),
        mode: a.resample.mode.into(),
        sizes: sizes("--size", &a.sizes)?,
        iterations: a.resample.iterations,
        seed: a.resample.seed,
        objectives,
        one_sided: a.one_sided,
        overrides: overrides(&a.overrides)?,
        ..scoring_config("dior", &a.scoring)
    };
    let data = load(&a.scoring.inputs)?;
    let mut rows = Vec::new();
    let mut plot = Vec::new();
    let alpha = if a.one_sided { 0.05 } else { 0.025 };
    for &size in &config.sizes {
        let cfg = DiorConfig {
            axis: config.axis,
            size,
            mode: config.mode,
            grouping: config.grouping,
            tie_policy: config.tie_policy,
            iterations: config.iterations,
            seed: config.seed,
            one_sided: config.one_sided,
            overrides: config.overrides.clone(),
        };
        for r in dior_many(&data, &cfg, &config.objectives)? {
            let upper = stats::upper_quantile(&stats::sorted(&r.samples), 1.0 - alpha);
            plot.push(PlotRow::new(r.objective.name(), size, r.lower_bound).band(r.lower_bound, upper));
            rows.push(DiorRow { size, objective: r.objective, dior: r.lower_bound, point_estimate: r.point_estimate, upper });
        }
    }
    emit(&config, &a.scoring.output.out, &rows, &plot)
}

fn cmd_best_model(a: &BestModelArgs) -> Result<Vec<PathBuf>, CliError> {
    check_iterations(a.resample.iterations)?;
    let config = RunConfig {
        axis: a.resample.axis.into(),
        mode: a.resample.mode.into(),
        sizes: vec![parse_size("--size", &a.size)?],
        iterations: a.resample.iterations,
        seed: a.resample.seed,
        top_removals: a.top_removals,
        ci: a.ci.into(),
        ..scoring_config("best-model", &a.scoring)
    };
    let data = load(&a.scoring.inputs)?;
    let cfg = BestModelConfig {
        axis: config.axis,
        size: config.sizes[0],
        mode: config.mode,
        grouping: config.grouping,
        tie_policy: config.tie_policy,
        iterations: config.iterations,
        seed: config.seed,
        top_removals: config.top_removals,
        ci: config.ci,
    };
    let report = best_model_error_rate(&data, &cfg)?;
    let plot: Vec<PlotRow> = report
        .repetitions
        .iter()
        .map(|r| {
            let (lo, hi) = r.agreement_ci;
            PlotRow::new("error_rate", r.removed.len(), r.error_rate).band(1.0 - hi, 1.0 - lo)
        })
        .collect();
    emit(&config, &a.scoring.output.out, &report, &plot)
}

fn cmd_curve(a: &CurveArgs) -> Result<Vec<PathBuf>, CliError> {
    check_iterations(a.iterations)?;
    if let Some(&c) = a.cluster_sizes.iter().find(|&&c| c < 2) {
        return Err(CliError::usage("--cluster-size", &c.to_string(), "cluster size must be at least 2"));
    }
    let config = RunConfig {
        mode: a.mode.into(),
        sizes: sizes("--size", &a.sizes)?,
        iterations: a.iterations,
        seed: a.seed,
        cluster_sizes: a.cluster_sizes.clone(),
        anchors: a.anchors,
        overrides: overrides(&a.overrides)?,
        ..scoring_config("cluster-curve", &a.scoring)
    };
    let data = load(&a.scoring.inputs)?;
    let cfg = ClusterCurveConfig {
        sizes: config.sizes.clone(),
        cluster_sizes: config.cluster_sizes.clone(),
        mode: config.mode,
        grouping: config.grouping,
        tie_policy: config.tie_policy,
        iterations: config.iterations,
        seed: config.seed,
        anchors: config.anchors,
        overrides: config.overrides.clone(),
    };
    let curve = cluster_error_curve(&data, &cfg)?;
    let plot: Vec<PlotRow> = curve
        .points
        .iter()
        .map(|p| PlotRow::new(format!("cluster_{}", p.cluster_size), p.calls, p.error_rate).band(p.band_lo, p.band_hi))
        .collect();
    emit(&config, &a.scoring.output.out, &curve, &plot)
}

fn cmd_prompts(a: &PromptArgs) -> Result<Vec<PathBuf>, CliError> {
    check_iterations(a.iterations)?;
    if a.budget == 0 {
        return Err(CliError::usage("--budget", "0", "budget must be at least 1"));
    }
    let mut modes: Vec<_> = a.modes.iter().map(|&m| m.into()).collect();
    if modes.is_empty() {
        modes = PromptCompareConfig::default().modes;
    }
    let config = RunConfig {
        modes,
        budget: a.budget,
        iterations: a.iterations,
        seed: a.seed,
        ..scoring_config("prompt-compare", &a.scoring)
    };
    let data = load(&a.scoring.inputs)?;
    let cfg = PromptCompareConfig {
        budget: config.budget,
        modes: config.modes.clone(),
        grouping: config.grouping,
        tie_policy: config.tie_policy,
        iterations: config.iterations,
        seed: config.seed,
    };
    let cmp = prompt_strategy_compare(&data, &cfg)?;
    let mut plot = Vec::new();
    for row in &cmp.rows {
        let series = format!("{}/{}", row.strategy.name(), row.mode.name());
        for m in &row.per_model {
            plot.push(PlotRow::new(series.clone(), &m.model, m.width).band(m.lo, m.hi));
        }
        plot.push(PlotRow::new(series, "mean", row.mean_ci_width));
    }
    emit(&config, &a.scoring.output.out, &cmp, &plot)
}

fn cmd_correlations(a: &DataArgs) -> Result<Vec<PathBuf>, CliError> {
    let config = RunConfig { inputs: paths(&a.inputs), tie_policy: a.tie_policy.into(), ..base("correlations", &a.output) };
    let data = load(&a.inputs)?;
    let m = subscenario_rank_correlations(&data, config.tie_policy)?;
    let mut plot = Vec::new();
    for (i, row) in m.tau.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            if let Some(t) = t {
                plot.push(PlotRow::new(m.subscenarios[i].clone(), &m.subscenarios[j], *t));
            }
        }
    }
    emit(&config, &a.output.out, &m, &plot)
}

fn calibration(a: &CalibrationArgs, seed: u64, config: &mut RunConfig) -> Result<CalibrationConfig, CliError> {
    check_iterations(a.iterations)?;
    if !(a.confidence > 0.0 && a.confidence < 1.0) {
        return Err(CliError::usage("--confidence", &a.confidence.to_string(), "expected a value strictly between 0 and 1"));
    }
    let tiers: TierConfig = a.tiers.parse().map_err(|e: benchrel::flash::FlashError| CliError::usage("--tiers", &a.tiers, &e.to_string()))?;
    config.sizes = sizes("--size", &a.sizes)?;
    config.tiers = tiers.to_string();
    config.iterations = a.iterations;
    config.confidence = a.confidence;
    config.pooling = a.pooling.into();
    config.seed = seed;
    Ok(CalibrationConfig {
        sizes: config.sizes.clone(),
        tiers,
        iterations: a.iterations,
        confidence: a.confidence,
        seed,
        grouping: config.grouping,
        tie_policy: config.tie_policy,
        pooling: config.pooling,
    })
}

fn resolution_plot(table: &ResolutionTable) -> Vec<PlotRow> {
    let mut plot: Vec<PlotRow> = table.entries.iter().map(|e| PlotRow::new("res", e.size, f64::from(e.res))).collect();
    for (t, tier) in table.config.tiers.tiers().iter().enumerate() {
        for e in table.entries.iter().filter(|e| !e.tier_res.is_empty()) {
            plot.push(PlotRow::new(format!("res_tier_{}", tier.label()), e.size, f64::from(e.tier_res[t])));
        }
    }
    plot
}

fn cmd_calibrate(a: &CalibrateArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut config = scoring_config("calibrate", &a.scoring);
    let cfg = calibration(&a.calibration, a.seed, &mut config)?;
    let data = load(&a.scoring.inputs)?;
    let table = calibrate_resolution(&data, &cfg)?;
    emit(&config, &a.scoring.output.out, &table, &resolution_plot(&table))
}

/// Reads a resolution table from a `calibrate` report or a bare table.
fn read_table(path: &Path) -> Result<ResolutionTable, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("Io: {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)?;
    if let Some(inner) = value.get_mut("result") {
        value = inner.take();
    }
    Ok(serde_json::from_value(value)?)
}

#[derive(Serialize)]
struct FlashResult {
    resolution: ResolutionTable,
    results: Vec<FlashRankResult>,
}

fn cmd_flash(a: &FlashArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut config = RunConfig {
        candidates: paths(&a.candidates),
        models: a.models.clone(),
        table: a.table.as_ref().map(|p| p.display().to_string()),
        ..scoring_config("flash-rank", &a.scoring)
    };
    let cfg = calibration(&a.calibration, a.seed, &mut config)?;
    let reference = load(&a.scoring.inputs)?;
    let candidates = load(&a.candidates)?;
    let resolution = match &a.table {
        Some(p) => read_table(p)?,
        None => calibrate_resolution(&reference, &cfg)?,
    };
    let models: Vec<String> = if a.models.is_empty() { candidates.models().to_vec() } else { a.models.clone() };
    let flash = FlashConfig { grouping: config.grouping, tie_policy: config.tie_policy, seed: a.seed, schedule: None };
    let mut results = Vec::new();
    let mut plot = Vec::new();
    for m in &models {
        let mut provider = TableProvider::from_data(&candidates, m)?;
        let r = flash_rank(&reference, &mut provider, &resolution, &flash)?;
        if !a.scoring.output.quiet {
            println!("{}\trank {}\ttier {}\tsavings {:.2}", r.model, r.final_rank, r.tier, r.savings_factor);
        }
        for s in &r.stages {
            let res = f64::from(s.res);
            let rank = s.rank as f64;
            plot.push(PlotRow::new(m.clone(), s.calls_so_far, rank).band((rank - res).max(1.0), rank + res));
        }
        results.push(r);
    }
    for r in &results {
        plot.push(PlotRow::new("savings", &r.model, r.savings_factor));
    }
    emit(&config, &a.scoring.output.out, &FlashResult { resolution, results }, &plot)
}

#[derive(Serialize)]
struct CaseVariantReport {
    label: String,
    data_file: String,
    models: Vec<String>,
    grouping: benchrel::scoring::Grouping,
    tie_policy: benchrel::scoring::TiePolicy,
    expected: BTreeMap<String, String>,
    expected_unit_win_rates: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize)]
struct CaseReport {
    case: String,
    variants: Vec<CaseVariantReport>,
}

#[derive(Serialize)]
struct SynthReport {
    spec: SynthSpec,
    data_file: String,
    newcomers: Vec<String>,
    models: usize,
    scenarios: usize,
    subscenarios: usize,
    records: usize,
}

fn write_data(data: &BenchmarkData, path: &Path) -> Result<(), CliError> {
    let file = fs::File::create(path)?;
    write_delimited(data, std::io::BufWriter::new(file))?;
    Ok(())
}

fn cmd_synth(a: &SynthArgs) -> Result<Vec<PathBuf>, CliError> {
    let out = &a.output.out;
    let mut config = RunConfig { seed: a.seed, newcomer_ranks: a.newcomer_ranks.clone(), ..base("synth", &a.output) };
    if let Some(case) = &a.case {
        config.synth_case = Some(case.clone());
        let case = appendix_case(case)?;
        fs::create_dir_all(out)?;
        let mut variants = Vec::new();
        let mut plot = Vec::new();
        let mut written = Vec::new();
        for v in &case.variants {
            let path = out.join(format!("synth_{}_{}.csv", case.name, v.label));
            write_data(&v.data, &path)?;
            let ratio = |r: &num_rational::Ratio<i64>| format!("{}/{}", r.numer(), r.denom());
            for (m, r) in &v.expected {
                plot.push(PlotRow::new(v.label.clone(), m, *r.numer() as f64 / *r.denom() as f64));
            }
            variants.push(CaseVariantReport {
                label: v.label.clone(),
                data_file: path.display().to_string(),
                models: v.models.clone(),
                grouping: v.grouping,
                tie_policy: v.tie_policy,
                expected: v.expected.iter().map(|(m, r)| (m.clone(), ratio(r))).collect(),
                expected_unit_win_rates: v
                    .expected_unit_win_rates
                    .iter()
                    .map(|(m, rs)| (m.clone(), rs.iter().map(ratio).collect()))
                    .collect(),
            });
            written.push(path);
        }
        written.extend(emit(&config, out, &CaseReport { case: case.name, variants }, &plot)?);
        return Ok(written);
    }

    let (spec, newcomers) = match (&a.spec, a.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("Io: {}: {e}", path.display())))?;
            config.synth_spec = Some(path.display().to_string());
            let mut spec = SynthSpec::from_toml(&text)?;
            spec.seed = a.seed;
            (spec, Vec::new())
        }
        (None, PresetArg::Reference) => {
            config.synth_preset = "reference".into();
            SynthSpec::reference_with_newcomers(a.seed, &a.newcomer_ranks)
                .map_err(|e| CliError::usage("--newcomer-rank", &format!("{:?}", a.newcomer_ranks), &e.to_string()))?
        }
        (None, preset) => {
            config.synth_preset = match preset {
                PresetArg::Heterogeneous => "heterogeneous",
                _ => "default",
            }
            .into();
            let spec = match preset {
                PresetArg::Heterogeneous => SynthSpec::heterogeneous(a.seed),
                _ => SynthSpec { seed: a.seed, ..SynthSpec::default() },
            };
            (spec, Vec::new())
        }
    };
    if !a.newcomer_ranks.is_empty() && config.synth_preset != "reference" {
        return Err(CliError::Usage("'--newcomer-rank' requires '--preset reference'".into()));
    }
    let data = generate(&spec)?;
    fs::create_dir_all(out)?;
    let path = out.join("synth_data.csv");
    write_data(&data, &path)?;
    let plot: Vec<PlotRow> = spec
        .model_names()
        .iter()
        .zip(spec.latent_values())
        .map(|(m, l)| PlotRow::new("latent", m, l))
        .collect();
    let report = SynthReport {
        data_file: path.display().to_string(),
        newcomers,
        models: data.n_models(),
        scenarios: data.n_scenarios(),
        subscenarios: data.subscenarios().len(),
        records: data.record_count(),
        spec,
    };
    let mut written = vec![path];
    written.extend(emit(&config, out, &report, &plot)?);
    Ok(written)
}
