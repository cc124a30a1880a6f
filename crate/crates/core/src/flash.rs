//! Coarse-to-fine ranking of a new model against a scored reference set.
//!
//! The new model is evaluated on growing nested subsamples. After each
//! stage its rank among the reference models is compared with the rank
//! resolution calibrated for that sample size, and evaluation stops once the
//! rank is known well enough for the tier it falls in.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::data::{BenchmarkData, DataError};
use crate::resampling::{
    allocate, derive_seed, iteration_rng, pool_size, Axis, Mode,
    ResampleError, Resampler, SampleSize,
};
use crate::scoring::{
    external_subscenario_mean, mwr_from_units, ranking, Grouping, PairSet, ScoringError,
    Selection, TiePolicy, UnitScores,
};

#[derive(Debug, thiserror::Error)]
pub enum FlashError {
    #[error("InsufficientModels: need at least 3 reference models, got {0}")]
    InsufficientModels(usize),
    #[error("UncalibratedSize: {0} is not in the resolution table")]
    UncalibratedSize(SampleSize),
    #[error("ProviderGap: no score for example {example} prompt {prompt} of {subscenario}")]
    ProviderGap {
        subscenario: String,
        example: String,
        prompt: String,
    },
    #[error("InvalidTiers: {0}")]
    InvalidTiers(String),
    #[error("InvalidSchedule: {0}")]
    InvalidSchedule(String),
    #[error("CalibrationMismatch: {0}")]
    CalibrationMismatch(String),
    #[error(transparent)]
    Resample(#[from] ResampleError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Rank precision a tier demands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    /// Only the complete evaluation will do.
    Full,
    /// The rank may be off by at most this many places.
    Within(u32),
}

impl Precision {
    fn level(self) -> i64 {
        match self {
            Precision::Full => -1,
            Precision::Within(p) => p as i64,
        }
    }

    fn satisfied(self, res: u32, at_max: bool) -> bool {
        match self {
            Precision::Full => at_max,
            Precision::Within(p) => res <= p,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Full => f.write_str("full"),
            Precision::Within(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Precision {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Precision::Full => s.serialize_str("full"),
            Precision::Within(p) => s.serialize_u32(*p),
        }
    }
}

impl<'de> Deserialize<'de> for Precision {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(p) => Ok(Precision::Within(p)),
            Raw::S(s) if s == "full" => Ok(Precision::Full),
            Raw::S(s) => Err(serde::de::Error::custom(format!("invalid precision {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tier {
    pub top: usize,
    /// `None` for the open-ended last tier.
    pub bottom: Option<usize>,
    pub precision: Precision,
}

impl Tier {
    pub fn label(&self) -> String {
        match self.bottom {
            None => format!("{}+", self.top),
            Some(b) if b == self.top => format!("{b}"),
            Some(b) => format!("{}-{b}", self.top),
        }
    }

    fn contains(&self, rank: usize) -> bool {
        rank >= self.top && self.bottom.is_none_or(|b| rank <= b)
    }
}

/// Rank bands with the precision each one requires.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Tier>", into = "Vec<Tier>")]
pub struct TierConfig {
    tiers: Vec<Tier>,
}

impl TryFrom<Vec<Tier>> for TierConfig {
    type Error = FlashError;

    fn try_from(tiers: Vec<Tier>) -> Result<Self, FlashError> {
        TierConfig::new(tiers)
    }
}

impl From<TierConfig> for Vec<Tier> {
    fn from(t: TierConfig) -> Self {
        t.tiers
    }
}

impl Default for TierConfig {
    fn default() -> Self {
        let t = |top, bottom, precision| Tier { top, bottom, precision };
        Self {
            tiers: vec![
                t(1, Some(1), Precision::Full),
                t(2, Some(4), Precision::Within(1)),
                t(5, Some(9), Precision::Within(2)),
                t(10, Some(19), Precision::Within(3)),
                t(20, None, Precision::Within(4)),
            ],
        }
    }
}

impl TierConfig {
    pub fn new(tiers: Vec<Tier>) -> Result<Self, FlashError> {
        let bad = |m: String| Err(FlashError::InvalidTiers(m));
        if tiers.is_empty() {
            return bad("no tiers".into());
        }
        if tiers[0].top != 1 {
            return bad("the first tier must start at rank 1".into());
        }
        for (i, t) in tiers.iter().enumerate() {
            let last = i + 1 == tiers.len();
            match (t.bottom, last) {
                (None, true) => {}
                (None, false) => return bad(format!("tier {} is open-ended but not last", t.label())),
                (Some(_), true) => return bad("the last tier must be open-ended".into()),
                (Some(b), false) => {
                    if b < t.top {
                        return bad(format!("tier {}-{b} is empty", t.top));
                    }
                    if tiers[i + 1].top != b + 1 {
                        return bad(format!("tiers leave a gap or overlap after rank {b}"));
                    }
                }
            }
            if i > 0 && t.precision.level() < tiers[i - 1].precision.level() {
                return bad(format!("tier {} demands more precision than the tier above", t.label()));
            }
        }
        Ok(Self { tiers })
    }

    pub fn tiers(&self) -> &[Tier] {
        &self.tiers
    }

    pub fn tier_index(&self, rank: usize) -> usize {
        self.tiers
            .iter()
            .position(|t| t.contains(rank))
            .unwrap_or(self.tiers.len() - 1)
    }

    pub fn tier_of(&self, rank: usize) -> &Tier {
        &self.tiers[self.tier_index(rank)]
    }

    /// Best rank of the first tier whose precision `res` satisfies, or
    /// `None` when no tier is resolved.
    pub fn tier_rank(&self, res: u32, at_max: bool) -> Option<usize> {
        self.tiers
            .iter()
            .find(|t| t.precision.satisfied(res, at_max))
            .map(|t| t.top)
    }
}

impl fmt::Display for TierConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tiers
            .iter()
            .map(|t| format!("{}:{}", t.label(), t.precision))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for TierConfig {
    type Err = FlashError;

    /// Parses `1:full,2-4:1,5-9:2,10-19:3,20+:4`.
    fn from_str(s: &str) -> Result<Self, FlashError> {
        let bad = |m: &str| FlashError::InvalidTiers(format!("{m} in {s:?}"));
        let tiers = s
            .split(',')
            .map(|part| {
                let (range, prec) = part.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
                let precision = if prec == "full" {
                    Precision::Full
                } else {
                    Precision::Within(prec.parse().map_err(|_| bad("bad precision"))?)
                };
                let num = |x: &str| x.parse::<usize>().map_err(|_| bad("bad rank"));
                let (top, bottom) = if let Some(t) = range.strip_suffix('+') {
                    (num(t)?, None)
                } else if let Some((a, b)) = range.split_once('-') {
                    (num(a)?, Some(num(b)?))
                } else {
                    let r = num(range)?;
                    (r, Some(r))
                };
                Ok(Tier { top, bottom, precision })
            })
            .collect::<Result<Vec<_>, FlashError>>()?;
        TierConfig::new(tiers)
    }
}

/// How rank deviations are pooled when calibrating.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    /// One resolution over every model.
    #[default]
    Global,
    /// One resolution per tier, from the models whose full-data rank lies
    /// in that tier.
    PerTier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub sizes: Vec<SampleSize>,
    pub tiers: TierConfig,
    pub iterations: usize,
    pub confidence: f64,
    pub seed: u64,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub pooling: Pooling,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            sizes: vec![
                SampleSize::Count(20),
                SampleSize::Count(50),
                SampleSize::Count(200),
                SampleSize::Count(1000),
                SampleSize::Full,
            ],
            tiers: TierConfig::default(),
            iterations: 1000,
            confidence: 0.95,
            seed: 0,
            grouping: Grouping::ByScenario,
            tie_policy: TiePolicy::Strict,
            pooling: Pooling::Global,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionEntry {
    pub size: SampleSize,
    /// Resolution after the non-increasing regularization.
    pub res: u32,
    /// Resolution measured at this size alone.
    pub raw_res: u32,
    pub tier_rank: Option<usize>,
    /// Regularized resolution per tier (per-tier pooling only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tier_res: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolutionTable {
    pub entries: Vec<ResolutionEntry>,
    pub models: Vec<String>,
    pub config: CalibrationConfig,
}

impl ResolutionTable {
    pub fn entry(&self, size: SampleSize) -> Option<&ResolutionEntry> {
        self.entries.iter().find(|e| e.size == size)
    }
}

fn check_sizes(sizes: &[SampleSize]) -> Result<(), FlashError> {
    if sizes.is_empty() {
        return Err(FlashError::InvalidSchedule("no sample sizes".into()));
    }
    if sizes.contains(&SampleSize::Count(0)) {
        return Err(FlashError::InvalidSchedule("sample sizes must be at least 1".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(FlashError::InvalidSchedule(
            "sample sizes must be strictly increasing with max last".into(),
        ));
    }
    Ok(())
}

/// Smallest `r` with at least `confidence` of the deviations `<= r`.
fn quantile_res(hist: &[u64], confidence: f64) -> u32 {
    let total: u64 = hist.iter().sum();
    let mut cum = 0;
    for (r, &c) in hist.iter().enumerate() {
        cum += c;
        if cum as f64 >= confidence * total as f64 {
            return r as u32;
        }
    }
    hist.len().saturating_sub(1) as u32
}

/// Makes a sequence non-increasing by raising earlier values.
fn running_max_from_right(v: &mut [u32]) {
    for i in (0..v.len().saturating_sub(1)).rev() {
        v[i] = v[i].max(v[i + 1]);
    }
}

/// Rank resolution of the reference set at each sample size.
pub fn calibrate_resolution(
    reference: &BenchmarkData,
    config: &CalibrationConfig,
) -> Result<ResolutionTable, FlashError> {
    let n = reference.n_models();
    if n < 3 {
        return Err(FlashError::InsufficientModels(n));
    }
    check_sizes(&config.sizes)?;
    if config.iterations == 0 {
        return Err(FlashError::InvalidSchedule("at least one iteration is needed".into()));
    }
    if !(config.confidence > 0.0 && config.confidence <= 1.0) {
        return Err(FlashError::InvalidSchedule("confidence must lie in (0, 1]".into()));
    }
    let samplers = config
        .sizes
        .iter()
        .map(|&s| Resampler::new(reference, Axis::Examples, s, Mode::Subsample))
        .collect::<Result<Vec<_>, _>>()?;
    let (grouping, tie) = (config.grouping, config.tie_policy);
    let full_units = UnitScores::compute(reference, grouping, &Selection::full(reference));
    let subset = full_units.all_models();
    let full_ranks = ranking(&mwr_from_units(&full_units, &subset, grouping, tie)?).ranks();
    let tiers = &config.tiers;
    let n_tiers = tiers.tiers().len();
    let model_tier: Vec<usize> = full_ranks.iter().map(|&r| tiers.tier_index(r)).collect();

    let mut raw = Vec::new();
    let mut raw_tier: Vec<Vec<u32>> = Vec::new();
    for (k, sampler) in samplers.iter().enumerate() {
        let seed = derive_seed(config.seed, k as u64);
        let hists: Vec<Vec<Vec<u64>>> = (0..config.iterations as u64)
            .into_par_iter()
            .map(|i| {
                let inst = sampler.draw(seed, i);
                let units = UnitScores::compute(reference, grouping, &inst.selection);
                let ranks = ranking(&mwr_from_units(&units, &subset, grouping, tie)?).ranks();
                let mut h = vec![vec![0u64; n]; n_tiers];
                for m in 0..n {
                    h[model_tier[m]][full_ranks[m].abs_diff(ranks[m])] += 1;
                }
                Ok(h)
            })
            .collect::<Result<_, ScoringError>>()?;
        let mut per_tier = vec![vec![0u64; n]; n_tiers];
        for h in &hists {
            for (t, row) in h.iter().enumerate() {
                for (d, c) in row.iter().enumerate() {
                    per_tier[t][d] += c;
                }
            }
        }
        let mut global = vec![0u64; n];
        for row in &per_tier {
            for (d, c) in row.iter().enumerate() {
                global[d] += c;
            }
        }
        raw.push(quantile_res(&global, config.confidence));
        raw_tier.push(
            per_tier
                .iter()
                .map(|row| {
                    if row.iter().sum::<u64>() == 0 {
                        0
                    } else {
                        quantile_res(row, config.confidence)
                    }
                })
                .collect(),
        );
    }

    let mut res = raw.clone();
    running_max_from_right(&mut res);
    let mut tier_res = raw_tier.clone();
    for t in 0..n_tiers {
        let mut col: Vec<u32> = tier_res.iter().map(|r| r[t]).collect();
        running_max_from_right(&mut col);
        for (k, v) in col.into_iter().enumerate() {
            tier_res[k][t] = v;
        }
    }
    let entries = config
        .sizes
        .iter()
        .enumerate()
        .map(|(k, &size)| {
            let at_max = size == SampleSize::Full;
            let (tier_rank, tr) = match config.pooling {
                Pooling::Global => (tiers.tier_rank(res[k], at_max), Vec::new()),
                Pooling::PerTier => {
                    let top = tiers
                        .tiers()
                        .iter()
                        .zip(&tier_res[k])
                        .find(|(t, &r)| t.precision.satisfied(r, at_max))
                        .map(|(t, _)| t.top);
                    (top, tier_res[k].clone())
                }
            };
            ResolutionEntry {
                size,
                res: res[k],
                raw_res: raw[k],
                tier_rank,
                tier_res: tr,
            }
        })
        .collect();
    Ok(ResolutionTable {
        entries,
        models: reference.models().to_vec(),
        config: config.clone(),
    })
}

/// Source of scores for the model being ranked.
pub trait ScoreProvider {
    fn model(&self) -> &str;

    /// Scores for the pairs `(example_ids[i], prompt_ids[i])` of one
    /// subscenario; `None` where the pair cannot be scored.
    fn score(
        &mut self,
        subscenario: &str,
        example_ids: &[&str],
        prompt_ids: &[&str],
    ) -> Vec<Option<f64>>;

    /// Pairs requested so far.
    fn calls(&self) -> u64;
}

/// Serves stored scores of one model and counts requests.
#[derive(Debug, Clone)]
pub struct TableProvider {
    model: String,
    scores: HashMap<String, HashMap<(String, String), f64>>,
    calls: u64,
}

impl TableProvider {
    /// Scores of `model` taken from a dataset.
    pub fn from_data(data: &BenchmarkData, model: &str) -> Result<Self, FlashError> {
        if data.model_index(model).is_none() {
            return Err(ScoringError::UnknownModel(model.to_string()).into());
        }
        let mut scores: HashMap<String, HashMap<(String, String), f64>> = HashMap::new();
        for r in data.records().filter(|r| r.model == model) {
            scores
                .entry(r.subscenario)
                .or_default()
                .insert((r.example_id, r.prompt_id), r.score);
        }
        Ok(Self {
            model: model.to_string(),
            scores,
            calls: 0,
        })
    }

    /// A dataset holding exactly one model.
    pub fn single(data: &BenchmarkData) -> Result<Self, FlashError> {
        match data.models() {
            [m] => Self::from_data(data, m),
            ms => Err(FlashError::CalibrationMismatch(format!(
                "provider data must hold one model, found {}",
                ms.len()
            ))),
        }
    }
}

impl ScoreProvider for TableProvider {
    fn model(&self) -> &str {
        &self.model
    }

    fn score(&mut self, subscenario: &str, example_ids: &[&str], prompt_ids: &[&str]) -> Vec<Option<f64>> {
        self.calls += example_ids.len() as u64;
        let sub = self.scores.get(subscenario);
        example_ids
            .iter()
            .zip(prompt_ids)
            .map(|(e, p)| sub.and_then(|s| s.get(&(e.to_string(), p.to_string())).copied()))
            .collect()
    }

    fn calls(&self) -> u64 {
        self.calls
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlashConfig {
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub seed: u64,
    /// Stage sizes; defaults to the table's sizes.
    pub schedule: Option<Vec<SampleSize>>,
}

impl Default for FlashConfig {
    fn default() -> Self {
        Self {
            grouping: Grouping::ByScenario,
            tie_policy: TiePolicy::Strict,
            seed: 0,
            schedule: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub size: SampleSize,
    /// Examples evaluated so far, over all subscenarios.
    pub examples: usize,
    pub calls_so_far: u64,
    pub rank: usize,
    pub res: u32,
    pub tier_rank: Option<usize>,
    pub stop: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlashRankResult {
    pub model: String,
    pub stages: Vec<Stage>,
    pub final_rank: usize,
    pub tier: String,
    pub calls_used: u64,
    pub full_calls: u64,
    pub savings_factor: f64,
    pub config: FlashConfig,
}

/// Runs the tournament for the provider's model.
pub fn flash_rank(
    reference: &BenchmarkData,
    provider: &mut dyn ScoreProvider,
    table: &ResolutionTable,
    config: &FlashConfig,
) -> Result<FlashRankResult, FlashError> {
    let (grouping, tie) = (config.grouping, config.tie_policy);
    if table.config.grouping != grouping || table.config.tie_policy != tie {
        return Err(FlashError::CalibrationMismatch(
            "table was calibrated with a different grouping or tie policy".into(),
        ));
    }
    if table.models != reference.models() {
        return Err(FlashError::CalibrationMismatch(
            "table was calibrated on a different reference set".into(),
        ));
    }
    let name = provider.model().to_string();
    if reference.model_index(&name).is_some() {
        return Err(FlashError::CalibrationMismatch(format!(
            "model {name} is already in the reference set"
        )));
    }
    let schedule = config.schedule.clone().unwrap_or_else(|| table.config.sizes.clone());
    check_sizes(&schedule)?;
    let entries = schedule
        .iter()
        .map(|&s| table.entry(s).ok_or(FlashError::UncalibratedSize(s)))
        .collect::<Result<Vec<_>, _>>()?;
    let max_pool = pool_size(reference, Axis::Examples);
    for s in &schedule {
        if let SampleSize::Count(n) = s {
            if *n > max_pool {
                return Err(ResampleError::SizeExceedsPool {
                    axis: Axis::Examples,
                    size: *n,
                    pool: max_pool,
                }
                .into());
            }
        }
    }

    let subs = reference.subscenarios();
    let perms: Vec<Vec<usize>> = subs
        .iter()
        .enumerate()
        .map(|(j, sub)| {
            let mut p: Vec<usize> = (0..sub.n_examples()).collect();
            p.shuffle(&mut iteration_rng(derive_seed(config.seed, j as u64), 0));
            p
        })
        .collect();
    let mut cache: Vec<Vec<f64>> = subs.iter().map(|s| vec![f64::NAN; s.n_cells()]).collect();
    let mut taken = vec![0usize; subs.len()];
    let start_calls = provider.calls();
    let tiers = &table.config.tiers;
    let mut stages = Vec::new();

    for (&size, entry) in schedule.iter().zip(&entries) {
        let mut want = vec![0usize; subs.len()];
        for s in 0..reference.n_scenarios() {
            let range = reference.scenario_subscenarios(s);
            let pools: Vec<usize> = range.clone().map(|j| subs[j].n_examples()).collect();
            let alloc = match size {
                SampleSize::Full => pools,
                SampleSize::Count(n) => allocate(n, &pools, true),
            };
            for (j, a) in range.zip(alloc) {
                want[j] = a.max(taken[j]);
            }
        }

        let mut selection = Selection::full(reference);
        for (j, sub) in subs.iter().enumerate() {
            let np = sub.n_prompts();
            let new = &perms[j][taken[j]..want[j]];
            if !new.is_empty() {
                let mut exs = Vec::with_capacity(new.len() * np);
                let mut prs = Vec::with_capacity(new.len() * np);
                for &e in new {
                    for p in 0..np {
                        exs.push(sub.examples[e].as_str());
                        prs.push(sub.prompts[p].as_str());
                    }
                }
                let got = provider.score(&sub.name, &exs, &prs);
                for (k, v) in got.into_iter().enumerate() {
                    let (e, p) = (new[k / np], k % np);
                    match v {
                        Some(v) if v.is_finite() => cache[j][e * np + p] = v,
                        _ => {
                            return Err(FlashError::ProviderGap {
                                subscenario: sub.name.clone(),
                                example: sub.examples[e].clone(),
                                prompt: sub.prompts[p].clone(),
                            })
                        }
                    }
                }
            }
            taken[j] = want[j];
            if taken[j] < sub.n_examples() {
                let mut mult = vec![0u32; sub.n_examples()];
                for &e in &perms[j][..taken[j]] {
                    mult[e] = 1;
                }
                selection.set_pairs(j, PairSet::Examples(mult));
            }
        }

        let mut units = UnitScores::compute(reference, grouping, &selection);
        let sub_means: Vec<Option<f64>> = subs
            .iter()
            .enumerate()
            .map(|(j, sub)| {
                let np = sub.n_prompts();
                let cells = &cache[j];
                external_subscenario_mean(sub, selection.pairs(j), |e, p| {
                    let v = cells[e * np + p];
                    (!v.is_nan()).then_some(v)
                })
            })
            .collect();
        let new_units = UnitScores::external(reference, grouping, &selection, &sub_means);
        units.push_model(name.clone(), &new_units);
        let scores = mwr_from_units(&units, &units.all_models(), grouping, tie)?;
        let rank = ranking(&scores).rank_of(&name).expect("new model is ranked");

        let res = match table.config.pooling {
            Pooling::Global => entry.res,
            Pooling::PerTier => entry.tier_res[tiers.tier_index(rank)],
        };
        let stop = entry
            .tier_rank
            .is_some_and(|t| rank as i64 - res as i64 >= t as i64);
        stages.push(Stage {
            size,
            examples: taken.iter().sum(),
            calls_so_far: provider.calls() - start_calls,
            rank,
            res,
            tier_rank: entry.tier_rank,
            stop,
        });
        if stop {
            break;
        }
    }

    let last = stages.last().expect("schedule is non-empty");
    let calls_used = last.calls_so_far;
    let full_calls: u64 = subs.iter().map(|s| s.n_cells() as u64).sum();
    Ok(FlashRankResult {
        model: name,
        final_rank: last.rank,
        tier: tiers.tier_of(last.rank).label(),
        calls_used,
        full_calls,
        savings_factor: full_calls as f64 / calls_used as f64,
        stages,
        config: config.clone(),
    })
}
