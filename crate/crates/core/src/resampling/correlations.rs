//! Agreement between the rankings of standalone subscenarios.

use serde::{Deserialize, Serialize};

use crate::data::BenchmarkData;
use crate::metrics::kendall_tau;
use crate::scoring::{mwr_from_units, ranking, Grouping, Ranking, ScoringError, Selection, TiePolicy, UnitScores, Unit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub subscenarios: Vec<String>,
    /// Scenario of each subscenario.
    pub scenarios: Vec<String>,
    /// Kendall τ between the rankings of two subscenarios over the models
    /// both cover; `None` when fewer than two models are shared.
    pub tau: Vec<Vec<Option<f64>>>,
    /// Mean off-diagonal τ between subscenarios of the same scenario.
    pub within_mean: Option<f64>,
    /// Mean τ between subscenarios of different scenarios.
    pub across_mean: Option<f64>,
}

fn standalone(units: &UnitScores, u: usize, subset: &[usize], tie: TiePolicy) -> Result<Ranking, ScoringError> {
    let row: Vec<Option<f64>> = (0..units.n_models()).map(|m| units.get(u, m)).collect();
    let one = UnitScores::from_rows(
        vec![Unit { name: units.units[u].name.clone(), weight: 1 }],
        units.models.clone(),
        &[row],
    );
    Ok(ranking(&mwr_from_units(&one, subset, Grouping::BySubscenario, tie)?))
}

pub fn subscenario_rank_correlations(
    data: &BenchmarkData,
    tie: TiePolicy,
) -> Result<CorrelationMatrix, ScoringError> {
    let n = data.n_models();
    if n < 2 {
        return Err(ScoringError::TooFewModels(n));
    }
    let units = UnitScores::compute(data, Grouping::BySubscenario, &Selection::full(data));
    let k = units.units.len();
    let mut tau = vec![vec![None; k]; k];
    let mut within = Vec::new();
    let mut across = Vec::new();
    let subs = data.subscenarios();
    for a in 0..k {
        for b in a..k {
            let common: Vec<usize> = (0..n)
                .filter(|&m| units.get(a, m).is_some() && units.get(b, m).is_some())
                .collect();
            if common.len() < 2 {
                continue;
            }
            let t = if a == b {
                1.0
            } else {
                let ra = standalone(&units, a, &common, tie)?;
                let rb = standalone(&units, b, &common, tie)?;
                kendall_tau(&ra, &rb).expect("same model set")
            };
            tau[a][b] = Some(t);
            tau[b][a] = Some(t);
            if a != b {
                if subs[a].scenario == subs[b].scenario {
                    within.push(t);
                } else {
                    across.push(t);
                }
            }
        }
    }
    let mean = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    Ok(CorrelationMatrix {
        subscenarios: subs.iter().map(|s| s.name.clone()).collect(),
        scenarios: subs.iter().map(|s| data.scenarios()[s.scenario].clone()).collect(),
        tau,
        within_mean: mean(&within),
        across_mean: mean(&across),
    })
}
