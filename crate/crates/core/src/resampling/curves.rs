//! Rank-switch rates: the top pair under repeated leader removal, and
//! clusters of neighbouring models as the sample size grows.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dior::{instance_ranking, original_ranking};
use super::{check_iterations, Axis, Mode, ResampleError, Resampler, SampleSize};
use crate::data::BenchmarkData;
use crate::metrics::switch_in_positions;
use crate::scoring::{mwr_from_units, ranking, Grouping, Ranking, TiePolicy, UnitScores};
use crate::stats::{self, ProportionCi};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestModelConfig {
    pub axis: Axis,
    pub size: SampleSize,
    pub mode: Mode,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub iterations: usize,
    pub seed: u64,
    pub top_removals: usize,
    pub ci: ProportionCi,
}

impl Default for BestModelConfig {
    fn default() -> Self {
        Self {
            axis: Axis::Examples,
            size: SampleSize::Full,
            mode: Mode::Bootstrap,
            grouping: Grouping::ByScenario,
            tie_policy: TiePolicy::Strict,
            iterations: 1000,
            seed: 0,
            top_removals: 5,
            ci: ProportionCi::Normal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestModelRepetition {
    /// Leaders removed before this repetition, in removal order.
    pub removed: Vec<String>,
    pub leader: String,
    pub runner_up: String,
    pub switches: u64,
    pub error_rate: f64,
    /// Interval for the agreement rate `1 - error_rate`.
    pub agreement_ci: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestModelReport {
    pub repetitions: Vec<BestModelRepetition>,
    pub mean_error_rate: f64,
    pub config: BestModelConfig,
}

/// Fraction of instantiations in which the runner-up overtakes the leader,
/// repeated after cumulatively removing each leader.
pub fn best_model_error_rate(
    data: &BenchmarkData,
    config: &BestModelConfig,
) -> Result<BestModelReport, ResampleError> {
    check_iterations(config.iterations)?;
    let needed = config.top_removals + 2;
    if data.n_models() < needed {
        return Err(ResampleError::InsufficientModels {
            needed,
            got: data.n_models(),
        });
    }
    let sampler = Resampler::new(data, config.axis, config.size, config.mode)?;
    let (grouping, tie) = (config.grouping, config.tie_policy);

    let full = UnitScores::compute(data, grouping, &crate::scoring::Selection::full(data));
    let mut subsets = Vec::new();
    let mut removed: Vec<usize> = Vec::new();
    for _ in 0..=config.top_removals {
        let subset: Vec<usize> = full
            .all_models()
            .into_iter()
            .filter(|m| !removed.contains(m))
            .collect();
        let r = ranking(&mwr_from_units(&full, &subset, grouping, tie)?);
        let leader = subset[r.order_idx[0]];
        let runner = subset[r.order_idx[1]];
        subsets.push((subset, removed.clone(), leader, runner));
        removed.push(leader);
    }

    let switched: Vec<Vec<bool>> = (0..config.iterations as u64)
        .into_par_iter()
        .map(|i| {
            let inst = sampler.draw(config.seed, i);
            let units = UnitScores::compute(data, grouping, &inst.selection);
            subsets
                .iter()
                .map(|(subset, _, leader, runner)| {
                    let r = ranking(&mwr_from_units(&units, subset, grouping, tie)?);
                    let name = |m: usize| &units.models[m];
                    Ok(r.rank_of(name(*runner)) < r.rank_of(name(*leader)))
                })
                .collect::<Result<Vec<bool>, ResampleError>>()
        })
        .collect::<Result<_, _>>()?;

    let b = config.iterations as u64;
    let repetitions: Vec<BestModelRepetition> = subsets
        .iter()
        .enumerate()
        .map(|(k, (_, removed, leader, runner))| {
            let switches = switched.iter().filter(|s| s[k]).count() as u64;
            BestModelRepetition {
                removed: removed.iter().map(|&m| full.models[m].clone()).collect(),
                leader: full.models[*leader].clone(),
                runner_up: full.models[*runner].clone(),
                switches,
                error_rate: switches as f64 / b as f64,
                agreement_ci: stats::proportion_ci(b - switches, b, config.ci),
            }
        })
        .collect();
    let mean_error_rate =
        repetitions.iter().map(|r| r.error_rate).sum::<f64>() / repetitions.len() as f64;
    Ok(BestModelReport {
        repetitions,
        mean_error_rate,
        config: config.clone(),
    })
}

/// Which reference positions a cluster may start at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchors {
    /// Every position where the cluster fits.
    #[default]
    All,
    /// Only the first `k` positions.
    Top(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCurveConfig {
    /// Examples per scenario.
    pub sizes: Vec<SampleSize>,
    pub cluster_sizes: Vec<usize>,
    pub mode: Mode,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub iterations: usize,
    pub seed: u64,
    pub anchors: Anchors,
    #[serde(default)]
    pub overrides: BTreeMap<String, usize>,
}

impl Default for ClusterCurveConfig {
    fn default() -> Self {
        Self {
            sizes: vec![
                SampleSize::Count(20),
                SampleSize::Count(50),
                SampleSize::Count(200),
                SampleSize::Full,
            ],
            cluster_sizes: vec![2, 3, 5, 10, 20],
            mode: Mode::Bootstrap,
            grouping: Grouping::ByScenario,
            tie_policy: TiePolicy::Strict,
            iterations: 1000,
            seed: 0,
            anchors: Anchors::All,
            overrides: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub size: SampleSize,
    /// Mean distinct example/prompt calls per instantiation.
    pub calls: f64,
    pub cluster_size: usize,
    pub anchors: usize,
    pub error_rate: f64,
    pub band_lo: f64,
    pub band_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCurve {
    pub points: Vec<CurvePoint>,
    /// Requested cluster sizes larger than the model count.
    pub skipped_cluster_sizes: Vec<usize>,
    pub config: ClusterCurveConfig,
}

/// Per-instantiation switch rate of every cluster size, averaged over anchors.
fn cluster_rates(
    orig: &Ranking,
    alt: &Ranking,
    clusters: &[usize],
    anchors: Anchors,
) -> Result<Vec<f64>, ResampleError> {
    let n = orig.len();
    let mut pos_alt = vec![0; n];
    for (p, &i) in alt.order_idx.iter().enumerate() {
        pos_alt[i] = p;
    }
    let seq: Vec<usize> = orig.order_idx.iter().map(|&i| pos_alt[i]).collect();
    clusters
        .iter()
        .map(|&c| {
            let last = anchor_count(n, c, anchors);
            let mut sum = 0u32;
            for a in 1..=last {
                sum += u32::from(switch_in_positions(&seq, a, c)?);
            }
            Ok(f64::from(sum) / last as f64)
        })
        .collect()
}

fn anchor_count(n: usize, cluster: usize, anchors: Anchors) -> usize {
    let fit = n + 1 - cluster;
    match anchors {
        Anchors::All => fit,
        Anchors::Top(k) => k.clamp(1, fit),
    }
}

/// Probability that the ends of a cluster of neighbouring models swap
/// places, per examples-axis size and cluster size.
pub fn cluster_error_curve(
    data: &BenchmarkData,
    config: &ClusterCurveConfig,
) -> Result<ClusterCurve, ResampleError> {
    check_iterations(config.iterations)?;
    let n = data.n_models();
    if n < 2 {
        return Err(ResampleError::DegenerateObjective(n));
    }
    let (clusters, skipped): (Vec<usize>, Vec<usize>) =
        config.cluster_sizes.iter().partition(|&&c| c <= n);
    if let Some(&c) = clusters.iter().find(|&&c| c < 2) {
        return Err(ResampleError::InvalidSize(format!("cluster size {c} is below 2")));
    }
    let samplers = config
        .sizes
        .iter()
        .map(|&s| Resampler::with_overrides(data, Axis::Examples, s, config.mode, &config.overrides))
        .collect::<Result<Vec<_>, _>>()?;
    let (units, orig) = original_ranking(data, config.grouping, config.tie_policy)?;
    let subset = units.all_models();

    let mut points = Vec::new();
    // Every size reuses the same per-iteration streams.
    for sampler in &samplers {
        let seed = config.seed;
        let per_iter: Vec<(Vec<f64>, u64)> = (0..config.iterations as u64)
            .into_par_iter()
            .map(|i| {
                let inst = sampler.draw(seed, i);
                let alt = instance_ranking(
                    data,
                    &inst.selection,
                    &subset,
                    config.grouping,
                    config.tie_policy,
                )?;
                let rates = cluster_rates(&orig, &alt, &clusters, config.anchors)?;
                Ok((rates, inst.selection.distinct_calls(data)))
            })
            .collect::<Result<_, ResampleError>>()?;
        let calls = per_iter.iter().map(|(_, c)| *c as f64).sum::<f64>() / per_iter.len() as f64;
        for (ci, &c) in clusters.iter().enumerate() {
            let rates: Vec<f64> = per_iter.iter().map(|(r, _)| r[ci]).collect();
            let (error_rate, band_lo, band_hi) = stats::mean_band(&rates);
            points.push(CurvePoint {
                size: sampler.size(),
                calls,
                cluster_size: c,
                anchors: anchor_count(n, c, config.anchors),
                error_rate,
                band_lo,
                band_hi,
            });
        }
    }
    Ok(ClusterCurve {
        points,
        skipped_cluster_sizes: skipped,
        config: config.clone(),
    })
}
