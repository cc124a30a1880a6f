//! Design-decision reliability (DIoR): the low end of the similarity
//! distribution between the original outcome and resampled outcomes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_iterations, Axis, Mode, ResampleError, Resampler, SampleSize};
use crate::data::BenchmarkData;
use crate::metrics::{
    cluster_switch, kendall_tau, mwr_similarity, weighted_kendall_tau, MetaMetricKind,
};
use crate::scoring::{mwr_from_units, ranking, Grouping, Ranking, ScoreTable, Selection, TiePolicy, UnitScores};
use crate::stats;

/// The benchmark outcome being compared, each tied to one meta-metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Whole ranking, Kendall τ.
    FullRanking,
    /// Whole ranking, weighted Kendall τ.
    FullRankingWeighted,
    /// Whether the top two keep their order.
    BestModel,
    /// MWR values themselves.
    ModelQuality,
}

impl Objective {
    pub const ALL: [Objective; 4] = [
        Objective::FullRanking,
        Objective::FullRankingWeighted,
        Objective::BestModel,
        Objective::ModelQuality,
    ];

    pub fn kind(self) -> MetaMetricKind {
        match self {
            Objective::FullRanking => MetaMetricKind::Kendall,
            Objective::FullRankingWeighted => MetaMetricKind::WeightedKendall,
            Objective::BestModel => MetaMetricKind::AgreementIndicator,
            Objective::ModelQuality => MetaMetricKind::MwrSimilarity,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::FullRanking => "kendall",
            Objective::FullRankingWeighted => "weighted_kendall",
            Objective::BestModel => "best_model",
            Objective::ModelQuality => "model_quality",
        }
    }

    /// Similarity in `[0, 1]` between the original and resampled outcome.
    pub fn similarity(
        self,
        orig: &Ranking,
        alt: &Ranking,
    ) -> Result<f64, ResampleError> {
        Ok(match self {
            Objective::FullRanking => (kendall_tau(orig, alt)? + 1.0) / 2.0,
            Objective::FullRankingWeighted => (weighted_kendall_tau(orig, alt)? + 1.0) / 2.0,
            Objective::BestModel => 1.0 - f64::from(cluster_switch(orig, alt, 1, 2)?),
            Objective::ModelQuality => mwr_similarity(&orig.table, &alt.table)?.similarity,
        })
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = ResampleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let long = |o: &Objective| match o {
            Objective::FullRanking => "full_ranking",
            Objective::FullRankingWeighted => "full_ranking_weighted",
            Objective::BestModel => "best_model",
            Objective::ModelQuality => "model_quality",
        };
        Objective::ALL
            .into_iter()
            .find(|o| o.name() == s || long(o) == s)
            .ok_or_else(|| ResampleError::UnknownObjective(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiorConfig {
    pub axis: Axis,
    pub size: SampleSize,
    pub mode: Mode,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub iterations: usize,
    pub seed: u64,
    /// Use the 5th percentile instead of the 2.5th.
    pub one_sided: bool,
    /// Examples drawn from specific subscenarios (examples axis).
    #[serde(default)]
    pub overrides: BTreeMap<String, usize>,
}

impl Default for DiorConfig {
    fn default() -> Self {
        Self {
            axis: Axis::Examples,
            size: SampleSize::Full,
            mode: Mode::Bootstrap,
            grouping: Grouping::ByScenario,
            tie_policy: TiePolicy::Strict,
            iterations: 1000,
            seed: 0,
            one_sided: false,
            overrides: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiorResult {
    pub axis: Axis,
    pub size: SampleSize,
    pub mode: Mode,
    pub objective: Objective,
    pub iterations: usize,
    pub seed: u64,
    pub samples: Vec<f64>,
    pub lower_bound: f64,
    pub point_estimate: f64,
    pub one_sided: bool,
}

/// `(lower_bound, median)` of a similarity sample.
pub fn summarize(samples: &[f64], one_sided: bool) -> (f64, f64) {
    let sorted = stats::sorted(samples);
    let alpha = if one_sided { 0.05 } else { 0.025 };
    (stats::lower_quantile(&sorted, alpha), stats::median(&sorted))
}

pub(crate) fn original_ranking(
    data: &BenchmarkData,
    grouping: Grouping,
    tie: TiePolicy,
) -> Result<(UnitScores, Ranking), ResampleError> {
    let units = UnitScores::compute(data, grouping, &Selection::full(data));
    let table = mwr_from_units(&units, &units.all_models(), grouping, tie)?;
    Ok((units, ranking(&table)))
}

pub(crate) fn instance_ranking(
    data: &BenchmarkData,
    selection: &Selection,
    subset: &[usize],
    grouping: Grouping,
    tie: TiePolicy,
) -> Result<Ranking, ResampleError> {
    let units = UnitScores::compute(data, grouping, selection);
    let table: ScoreTable = mwr_from_units(&units, subset, grouping, tie)?;
    Ok(ranking(&table))
}

/// DIoR of one objective.
pub fn dior(
    data: &BenchmarkData,
    config: &DiorConfig,
    objective: Objective,
) -> Result<DiorResult, ResampleError> {
    Ok(dior_many(data, config, &[objective])?.remove(0))
}

/// DIoR of several objectives over one shared set of instantiations.
pub fn dior_many(
    data: &BenchmarkData,
    config: &DiorConfig,
    objectives: &[Objective],
) -> Result<Vec<DiorResult>, ResampleError> {
    check_iterations(config.iterations)?;
    if data.n_models() < 2 {
        return Err(ResampleError::DegenerateObjective(data.n_models()));
    }
    let sampler = Resampler::with_overrides(
        data,
        config.axis,
        config.size,
        config.mode,
        &config.overrides,
    )?;
    let (units, orig) = original_ranking(data, config.grouping, config.tie_policy)?;
    let subset = units.all_models();
    let per_iter: Vec<Vec<f64>> = (0..config.iterations as u64)
        .into_par_iter()
        .map(|i| {
            let inst = sampler.draw(config.seed, i);
            let alt = instance_ranking(
                data,
                &inst.selection,
                &subset,
                config.grouping,
                config.tie_policy,
            )?;
            objectives
                .iter()
                .map(|o| o.similarity(&orig, &alt))
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(objectives
        .iter()
        .enumerate()
        .map(|(k, &objective)| {
            let samples: Vec<f64> = per_iter.iter().map(|v| v[k]).collect();
            let (lower_bound, point_estimate) = summarize(&samples, config.one_sided);
            DiorResult {
                axis: config.axis,
                size: config.size,
                mode: config.mode,
                objective,
                iterations: config.iterations,
                seed: config.seed,
                samples,
                lower_bound,
                point_estimate,
                one_sided: config.one_sided,
            }
        })
        .collect())
}
