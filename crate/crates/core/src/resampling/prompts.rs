//! Pairing examples with prompts at a fixed call budget: every prompt on a
//! few examples, or uniformly drawn example/prompt pairs.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_iterations, derive_seed, draw_counts, iteration_rng, Mode, ResampleError};
use crate::data::BenchmarkData;
use crate::scoring::{mwr_from_units, Grouping, PairSet, Selection, TiePolicy, UnitScores};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingStrategy {
    /// `budget / prompts` examples, each with every prompt.
    AllPrompts,
    /// Pairs drawn uniformly from the example × prompt cross product.
    UniformPairs,
}

impl PairingStrategy {
    pub fn name(self) -> &'static str {
        match self {
            PairingStrategy::AllPrompts => "all_prompts",
            PairingStrategy::UniformPairs => "uniform_pairs",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptCompareConfig {
    /// Calls per subscenario.
    pub budget: usize,
    pub modes: Vec<Mode>,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for PromptCompareConfig {
    fn default() -> Self {
        Self {
            budget: 100,
            modes: vec![Mode::Bootstrap, Mode::Subsample],
            grouping: Grouping::ByScenario,
            tie_policy: TiePolicy::Strict,
            iterations: 1000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInterval {
    pub model: String,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRow {
    pub strategy: PairingStrategy,
    pub mode: Mode,
    /// Calls actually spent per eligible subscenario.
    pub calls: Vec<usize>,
    pub mean_ci_width: f64,
    pub per_model: Vec<ModelInterval>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptComparison {
    pub eligible: Vec<String>,
    /// Subscenarios with a single distinct prompt.
    pub excluded: Vec<String>,
    pub rows: Vec<StrategyRow>,
    pub config: PromptCompareConfig,
}

/// Per-model MWR interval widths of both pairing strategies at equal call
/// budget, under each resampling mode.
pub fn prompt_strategy_compare(
    data: &BenchmarkData,
    config: &PromptCompareConfig,
) -> Result<PromptComparison, ResampleError> {
    check_iterations(config.iterations)?;
    if data.n_models() < 2 {
        return Err(ResampleError::DegenerateObjective(data.n_models()));
    }
    let subs = data.subscenarios();
    let (eligible, excluded): (Vec<usize>, Vec<usize>) =
        (0..subs.len()).partition(|&j| subs[j].n_prompts() >= 2);
    if eligible.is_empty() {
        return Err(ResampleError::NoEligibleSubscenario);
    }
    // Examples per subscenario under all_prompts; both strategies spend
    // exactly k * prompts calls.
    let mut per_examples = vec![0; subs.len()];
    for &j in &eligible {
        let sub = &subs[j];
        if config.budget > sub.n_cells() {
            return Err(ResampleError::BudgetExceedsCrossProduct {
                subscenario: sub.name.clone(),
                budget: config.budget,
                cells: sub.n_cells(),
            });
        }
        if config.budget < sub.n_prompts() {
            return Err(ResampleError::BudgetBelowPromptCount {
                subscenario: sub.name.clone(),
                budget: config.budget,
                prompts: sub.n_prompts(),
            });
        }
        per_examples[j] = config.budget / sub.n_prompts();
    }
    let base = Selection::only_subscenarios(data, &eligible);

    let mut rows = Vec::new();
    for (mi, &mode) in config.modes.iter().enumerate() {
        for (si, strategy) in [PairingStrategy::AllPrompts, PairingStrategy::UniformPairs]
            .into_iter()
            .enumerate()
        {
            let seed = derive_seed(config.seed, (mi * 2 + si) as u64);
            let per_iter: Vec<Vec<f64>> = (0..config.iterations as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = iteration_rng(seed, i);
                    let mut sel = base.clone();
                    for &j in &eligible {
                        let sub = &subs[j];
                        let (ne, np) = (sub.n_examples(), sub.n_prompts());
                        let k = per_examples[j];
                        let cells = match strategy {
                            PairingStrategy::AllPrompts => {
                                let ex = draw_counts(&mut rng, ne, k, mode);
                                let pr = match mode {
                                    Mode::Subsample => vec![1; np],
                                    Mode::Bootstrap => draw_counts(&mut rng, np, np, mode),
                                };
                                let mut cells = vec![0u32; ne * np];
                                for e in 0..ne {
                                    for p in 0..np {
                                        cells[e * np + p] = ex[e] * pr[p];
                                    }
                                }
                                cells
                            }
                            PairingStrategy::UniformPairs => {
                                let mut cells = vec![0u32; ne * np];
                                match mode {
                                    Mode::Bootstrap => {
                                        for _ in 0..k * np {
                                            cells[rng.random_range(0..ne * np)] += 1;
                                        }
                                    }
                                    Mode::Subsample => {
                                        for c in index::sample(&mut rng, ne * np, k * np) {
                                            cells[c] = 1;
                                        }
                                    }
                                }
                                cells
                            }
                        };
                        sel.set_pairs(j, PairSet::Cells(cells));
                    }
                    let units = UnitScores::compute(data, config.grouping, &sel);
                    let table =
                        mwr_from_units(&units, &units.all_models(), config.grouping, config.tie_policy)?;
                    Ok(table.values)
                })
                .collect::<Result<_, ResampleError>>()?;

            let per_model: Vec<ModelInterval> = data
                .models()
                .iter()
                .enumerate()
                .map(|(m, name)| {
                    let v = stats::sorted(&per_iter.iter().map(|r| r[m]).collect::<Vec<_>>());
                    let lo = stats::lower_quantile(&v, 0.025);
                    let hi = stats::upper_quantile(&v, 0.975);
                    ModelInterval {
                        model: name.clone(),
                        lo,
                        hi,
                        width: hi - lo,
                    }
                })
                .collect();
            rows.push(StrategyRow {
                strategy,
                mode,
                calls: eligible.iter().map(|&j| per_examples[j] * subs[j].n_prompts()).collect(),
                mean_ci_width: stats::mean(&per_model.iter().map(|m| m.width).collect::<Vec<_>>()),
                per_model,
            });
        }
    }
    Ok(PromptComparison {
        eligible: eligible.iter().map(|&j| subs[j].name.clone()).collect(),
        excluded: excluded.iter().map(|&j| subs[j].name.clone()).collect(),
        rows,
        config: config.clone(),
    })
}
