//! Subscenario and scenario scores, Mean Win Rate (MWR), and rankings.
//!
//! MWR of a model is the weighted average, over the units it was scored on,
//! of the fraction of opponents it beats on that unit. A unit is a scenario
//! or, under [`Grouping::BySubscenario`], a single subscenario. Opponents
//! missing a unit are left out of that unit's opponent set.
//!
//! Win fractions are rationals, so MWR is accumulated exactly and rounded to
//! `f64` once. Rankings order by the exact value.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::data::{BenchmarkData, SubscenarioIndex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScoringError {
    #[error("MissingSubmission: model {model} has no scores for {unit}")]
    MissingSubmission { model: String, unit: String },
    #[error("EmptySelection: nothing selected from {0}")]
    EmptySelection(String),
    #[error("TooFewModels: need at least 2 models, got {0}")]
    TooFewModels(usize),
    #[error("NoCommonScenario: model {0} shares no scored unit with any opponent")]
    NoCommonScenario(String),
    #[error("UnknownModel: {0}")]
    UnknownModel(String),
    #[error("UnknownScenario: {0}")]
    UnknownScenario(String),
    #[error("UnknownSubscenario: {0}")]
    UnknownSubscenario(String),
}

/// How subscenario scores are grouped before models are compared.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    #[default]
    ByScenario,
    BySubscenario,
}

impl Grouping {
    pub fn name(self) -> &'static str {
        match self {
            Grouping::ByScenario => "by_scenario",
            Grouping::BySubscenario => "by_subscenario",
        }
    }
}

/// Credit given when two models have exactly equal unit scores.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// A tie is a loss for both sides.
    #[default]
    Strict,
    /// A tie is worth half a win.
    Half,
}

/// Which `(example, prompt)` cells of one subscenario are included.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSet {
    /// Every cell once.
    All,
    /// Multiplicity per example; each chosen example brings all its prompts.
    Examples(Vec<u32>),
    /// Multiplicity per cell, indexed `example * n_prompts + prompt`.
    Cells(Vec<u32>),
}

/// The part of a dataset one evaluation sees, with multiplicities.
///
/// A weight of zero drops a scenario or subscenario; bootstrap draws give
/// weights above one.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    scenario_weights: Vec<u32>,
    subscenario_weights: Vec<u32>,
    pairs: Vec<PairSet>,
}

impl Selection {
    /// Everything, once.
    pub fn full(data: &BenchmarkData) -> Self {
        Self {
            scenario_weights: vec![1; data.n_scenarios()],
            subscenario_weights: vec![1; data.subscenarios().len()],
            pairs: vec![PairSet::All; data.subscenarios().len()],
        }
    }

    pub fn scenario_weights(&self) -> &[u32] {
        &self.scenario_weights
    }

    pub fn subscenario_weights(&self) -> &[u32] {
        &self.subscenario_weights
    }

    pub fn pairs(&self, subscenario: usize) -> &PairSet {
        &self.pairs[subscenario]
    }

    pub fn set_scenario_weights(&mut self, weights: Vec<u32>) {
        assert_eq!(weights.len(), self.scenario_weights.len());
        self.scenario_weights = weights;
    }

    pub fn set_subscenario_weights(&mut self, weights: Vec<u32>) {
        assert_eq!(weights.len(), self.subscenario_weights.len());
        self.subscenario_weights = weights;
    }

    /// Sets the pair set of one subscenario. An all-zero multiplicity vector
    /// drops the subscenario.
    pub fn set_pairs(&mut self, subscenario: usize, pairs: PairSet) {
        let empty = match &pairs {
            PairSet::All => false,
            PairSet::Examples(c) | PairSet::Cells(c) => c.iter().all(|&x| x == 0),
        };
        if empty {
            self.subscenario_weights[subscenario] = 0;
        }
        self.pairs[subscenario] = pairs;
    }

    /// Keeps only the listed subscenarios (weight 1 each).
    pub fn only_subscenarios(data: &BenchmarkData, keep: &[usize]) -> Self {
        let mut sel = Self::full(data);
        let mut w = vec![0; data.subscenarios().len()];
        for &j in keep {
            w[j] = 1;
        }
        sel.subscenario_weights = w;
        sel
    }

    fn is_active(&self, data: &BenchmarkData, subscenario: usize) -> bool {
        self.subscenario_weights[subscenario] > 0
            && self.scenario_weights[data.subscenario(subscenario).scenario] > 0
    }

    /// Distinct `(example, prompt)` cells covered, i.e. the inference calls
    /// needed to evaluate one new model on this selection.
    pub fn distinct_calls(&self, data: &BenchmarkData) -> u64 {
        (0..self.pairs.len())
            .filter(|&j| self.is_active(data, j))
            .map(|j| {
                let sub = data.subscenario(j);
                match &self.pairs[j] {
                    PairSet::All => sub.n_cells() as u64,
                    PairSet::Examples(c) => {
                        c.iter().filter(|&&x| x > 0).count() as u64 * sub.n_prompts() as u64
                    }
                    PairSet::Cells(c) => c.iter().filter(|&&x| x > 0).count() as u64,
                }
            })
            .sum()
    }

    pub fn summary(&self, data: &BenchmarkData) -> SelectionSummary {
        SelectionSummary {
            scenarios: self.scenario_weights.iter().filter(|&&w| w > 0).count(),
            subscenarios: (0..self.pairs.len()).filter(|&j| self.is_active(data, j)).count(),
            distinct_calls: self.distinct_calls(data),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionSummary {
    pub scenarios: usize,
    pub subscenarios: usize,
    pub distinct_calls: u64,
}

/// Multiplicity-weighted score sums of every model on one subscenario.
fn accumulate(sub: &SubscenarioIndex, pairs: &PairSet, sums: &mut [f64], counts: &mut [f64]) {
    sums.iter_mut().for_each(|x| *x = 0.0);
    counts.iter_mut().for_each(|x| *x = 0.0);
    let mut add_example = |e: usize, c: f64| {
        let (row, cnt) = sub.example_row(e);
        for m in 0..row.len() {
            if cnt[m] > 0 {
                sums[m] += c * row[m];
                counts[m] += c * cnt[m] as f64;
            }
        }
    };
    match pairs {
        PairSet::All => (0..sub.n_examples()).for_each(|e| add_example(e, 1.0)),
        PairSet::Examples(mult) => {
            for (e, &c) in mult.iter().enumerate() {
                if c > 0 {
                    add_example(e, c as f64);
                }
            }
        }
        PairSet::Cells(mult) => {
            // Sum prompts within an example first so that selecting every
            // cell once reproduces the `All` sums bit for bit.
            let np = sub.n_prompts();
            let n = sums.len();
            let mut tmp = vec![0.0; n];
            let mut tmp_cnt = vec![0.0; n];
            for e in 0..sub.n_examples() {
                let cells = &mult[e * np..(e + 1) * np];
                if cells.iter().all(|&c| c == 0) {
                    continue;
                }
                tmp.iter_mut().for_each(|x| *x = 0.0);
                tmp_cnt.iter_mut().for_each(|x| *x = 0.0);
                for (p, &c) in cells.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let row = sub.cell_row(e * np + p);
                    for m in 0..n {
                        if !row[m].is_nan() {
                            tmp[m] += c as f64 * row[m];
                            tmp_cnt[m] += c as f64;
                        }
                    }
                }
                for m in 0..n {
                    if tmp_cnt[m] > 0.0 {
                        sums[m] += tmp[m];
                        counts[m] += tmp_cnt[m];
                    }
                }
            }
        }
    }
}

/// Selected-cell mean of a single model whose scores come from `score`,
/// summed in the same order as dataset models so equal inputs give equal bits.
pub fn external_subscenario_mean(
    sub: &SubscenarioIndex,
    pairs: &PairSet,
    mut score: impl FnMut(usize, usize) -> Option<f64>,
) -> Option<f64> {
    let np = sub.n_prompts();
    let (mut sum, mut count) = (0.0, 0.0);
    for e in 0..sub.n_examples() {
        let (mut s, mut c) = (0.0, 0.0);
        match pairs {
            PairSet::All | PairSet::Examples(_) => {
                let mult = match pairs {
                    PairSet::Examples(m) => m[e],
                    _ => 1,
                };
                if mult == 0 {
                    continue;
                }
                let mut cnt = 0u32;
                for p in 0..np {
                    if let Some(v) = score(e, p) {
                        s += v;
                        cnt += 1;
                    }
                }
                if cnt > 0 {
                    sum += mult as f64 * s;
                    count += mult as f64 * cnt as f64;
                }
                continue;
            }
            PairSet::Cells(mult) => {
                for p in 0..np {
                    let k = mult[e * np + p];
                    if k == 0 {
                        continue;
                    }
                    if let Some(v) = score(e, p) {
                        s += k as f64 * v;
                        c += k as f64;
                    }
                }
            }
        }
        if c > 0.0 {
            sum += s;
            count += c;
        }
    }
    (count > 0.0).then(|| sum / count)
}

/// Mean of the model's selected scores on one subscenario, counting
/// multiplicity. Selected pairs the model lacks are skipped.
pub fn subscenario_score(
    data: &BenchmarkData,
    model: &str,
    subscenario: &str,
    selection: &Selection,
) -> Result<f64, ScoringError> {
    let m = data
        .model_index(model)
        .ok_or_else(|| ScoringError::UnknownModel(model.to_string()))?;
    let j = data
        .subscenario_index(subscenario)
        .ok_or_else(|| ScoringError::UnknownSubscenario(subscenario.to_string()))?;
    subscenario_score_idx(data, m, j, selection)
}

fn subscenario_score_idx(
    data: &BenchmarkData,
    m: usize,
    j: usize,
    selection: &Selection,
) -> Result<f64, ScoringError> {
    let sub = data.subscenario(j);
    if !selection.is_active(data, j) {
        return Err(ScoringError::EmptySelection(sub.name.clone()));
    }
    let missing = || ScoringError::MissingSubmission {
        model: data.models()[m].clone(),
        unit: sub.name.clone(),
    };
    if !sub.has_model(m) {
        return Err(missing());
    }
    let n = data.n_models();
    let (mut sums, mut counts) = (vec![0.0; n], vec![0.0; n]);
    accumulate(sub, selection.pairs(j), &mut sums, &mut counts);
    if counts[m] == 0.0 {
        return Err(missing());
    }
    Ok(sums[m] / counts[m])
}

/// Unweighted (multiplicity-weighted under resampling) mean of the
/// scenario's available subscenario scores. Under `BySubscenario` the
/// `scenario` argument names a subscenario.
pub fn scenario_score(
    data: &BenchmarkData,
    model: &str,
    scenario: &str,
    selection: &Selection,
    grouping: Grouping,
) -> Result<f64, ScoringError> {
    let m = data
        .model_index(model)
        .ok_or_else(|| ScoringError::UnknownModel(model.to_string()))?;
    let subs: Vec<usize> = match grouping {
        Grouping::ByScenario => {
            let s = data
                .scenario_index(scenario)
                .ok_or_else(|| ScoringError::UnknownScenario(scenario.to_string()))?;
            data.scenario_subscenarios(s).collect()
        }
        Grouping::BySubscenario => vec![data
            .subscenario_index(scenario)
            .ok_or_else(|| ScoringError::UnknownSubscenario(scenario.to_string()))?],
    };
    let (mut total, mut weight) = (0.0, 0.0);
    for j in subs {
        let w = selection.subscenario_weights()[j];
        if w == 0 || !selection.is_active(data, j) {
            continue;
        }
        if let Ok(v) = subscenario_score_idx(data, m, j, selection) {
            total += w as f64 * v;
            weight += w as f64;
        }
    }
    if weight == 0.0 {
        return Err(ScoringError::MissingSubmission {
            model: model.to_string(),
            unit: scenario.to_string(),
        });
    }
    Ok(total / weight)
}

/// One comparison unit (scenario or standalone subscenario).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub name: String,
    pub weight: u32,
}

/// Per-unit scores of every model; NaN marks a model without a score.
#[derive(Debug, Clone)]
pub struct UnitScores {
    pub units: Vec<Unit>,
    pub models: Vec<String>,
    scores: Vec<f64>,
}

impl UnitScores {
    pub fn compute(data: &BenchmarkData, grouping: Grouping, selection: &Selection) -> Self {
        let n = data.n_models();
        let subs = data.subscenarios();
        let mut sub_scores: Vec<Option<Vec<f64>>> = vec![None; subs.len()];
        let (mut sums, mut counts) = (vec![0.0; n], vec![0.0; n]);
        for (j, sub) in subs.iter().enumerate() {
            if !selection.is_active(data, j) {
                continue;
            }
            accumulate(sub, selection.pairs(j), &mut sums, &mut counts);
            let row = (0..n)
                .map(|m| if counts[m] > 0.0 { sums[m] / counts[m] } else { f64::NAN })
                .collect();
            sub_scores[j] = Some(row);
        }

        Self::aggregate(data, grouping, selection, &sub_scores, data.models().to_vec())
    }

    /// Unit scores of one model outside the dataset, given its mean on each
    /// active subscenario. Units line up with [`UnitScores::compute`].
    pub fn external(
        data: &BenchmarkData,
        grouping: Grouping,
        selection: &Selection,
        sub_means: &[Option<f64>],
    ) -> Vec<Option<f64>> {
        assert_eq!(sub_means.len(), data.subscenarios().len());
        let sub_scores: Vec<Option<Vec<f64>>> = (0..sub_means.len())
            .map(|j| {
                selection
                    .is_active(data, j)
                    .then(|| vec![sub_means[j].unwrap_or(f64::NAN)])
            })
            .collect();
        let one = Self::aggregate(data, grouping, selection, &sub_scores, vec![String::new()]);
        (0..one.units.len()).map(|u| one.get(u, 0)).collect()
    }

    fn aggregate(
        data: &BenchmarkData,
        grouping: Grouping,
        selection: &Selection,
        sub_scores: &[Option<Vec<f64>>],
        models: Vec<String>,
    ) -> Self {
        let n = models.len();
        let subs = data.subscenarios();
        let mut units = Vec::new();
        let mut scores = Vec::new();
        for s in 0..data.n_scenarios() {
            let ws = selection.scenario_weights()[s];
            if ws == 0 {
                continue;
            }
            let range = data.scenario_subscenarios(s);
            match grouping {
                Grouping::BySubscenario => {
                    for j in range {
                        if let Some(row) = &sub_scores[j] {
                            units.push(Unit {
                                name: subs[j].name.clone(),
                                weight: ws * selection.subscenario_weights()[j],
                            });
                            scores.extend_from_slice(row);
                        }
                    }
                }
                Grouping::ByScenario => {
                    if range.clone().all(|j| sub_scores[j].is_none()) {
                        continue;
                    }
                    for m in 0..n {
                        let (mut total, mut weight) = (0.0, 0.0);
                        for j in range.clone() {
                            if let Some(row) = &sub_scores[j] {
                                if !row[m].is_nan() {
                                    let w = selection.subscenario_weights()[j] as f64;
                                    total += w * row[m];
                                    weight += w;
                                }
                            }
                        }
                        scores.push(if weight > 0.0 { total / weight } else { f64::NAN });
                    }
                    units.push(Unit {
                        name: data.scenarios()[s].clone(),
                        weight: ws,
                    });
                }
            }
        }
        Self {
            units,
            models,
            scores,
        }
    }

    /// Builds unit scores directly; `scores[u][m]` with `None` for missing.
    pub fn from_rows(units: Vec<Unit>, models: Vec<String>, rows: &[Vec<Option<f64>>]) -> Self {
        assert_eq!(units.len(), rows.len());
        let scores = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), models.len());
                r.iter().map(|v| v.unwrap_or(f64::NAN))
            })
            .collect();
        Self {
            units,
            models,
            scores,
        }
    }

    pub fn n_models(&self) -> usize {
        self.models.len()
    }

    pub fn get(&self, unit: usize, model: usize) -> Option<f64> {
        let v = self.scores[unit * self.models.len() + model];
        (!v.is_nan()).then_some(v)
    }

    /// Appends a model with one score per unit.
    pub fn push_model(&mut self, name: String, unit_scores: &[Option<f64>]) {
        assert_eq!(unit_scores.len(), self.units.len());
        let n = self.models.len();
        let mut scores = Vec::with_capacity(self.units.len() * (n + 1));
        for (u, extra) in unit_scores.iter().enumerate() {
            scores.extend_from_slice(&self.scores[u * n..(u + 1) * n]);
            scores.push(extra.unwrap_or(f64::NAN));
        }
        self.models.push(name);
        self.scores = scores;
    }

    pub fn all_models(&self) -> Vec<usize> {
        (0..self.models.len()).collect()
    }
}

/// Exact win fraction of one model on one unit: `credit / (2 * opponents)`
/// where a win is worth 2 and a half-credit tie 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WinFraction {
    pub credit: u64,
    pub opponents: u64,
}

impl WinFraction {
    pub fn ratio(self) -> Ratio<i128> {
        Ratio::new(self.credit as i128, 2 * self.opponents as i128)
    }
}

/// Win fraction of every model in `subset` on every unit; `None` when the
/// model lacks the unit or has no opponent on it.
pub fn unit_win_fractions(
    units: &UnitScores,
    subset: &[usize],
    tie: TiePolicy,
) -> Vec<Vec<Option<WinFraction>>> {
    subset
        .iter()
        .map(|&m| {
            (0..units.units.len())
                .map(|u| {
                    let mine = units.get(u, m)?;
                    let (mut credit, mut opponents) = (0u64, 0u64);
                    for &o in subset {
                        if o == m {
                            continue;
                        }
                        let Some(theirs) = units.get(u, o) else { continue };
                        opponents += 1;
                        if mine > theirs {
                            credit += 2;
                        } else if mine == theirs && tie == TiePolicy::Half {
                            credit += 1;
                        }
                    }
                    (opponents > 0).then_some(WinFraction { credit, opponents })
                })
                .collect()
        })
        .collect()
}

/// MWR of every model in the evaluated set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub models: Vec<String>,
    pub values: Vec<f64>,
    exact: Vec<Option<Ratio<i128>>>,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub selection: Option<SelectionSummary>,
}

impl ScoreTable {
    pub fn get(&self, model: &str) -> Option<f64> {
        self.models.iter().position(|m| m == model).map(|i| self.values[i])
    }

    /// The exact rational MWR when it fits in 128-bit arithmetic.
    pub fn exact(&self, model: &str) -> Option<Ratio<i128>> {
        self.models
            .iter()
            .position(|m| m == model)
            .and_then(|i| self.exact[i])
    }

    pub fn exact_at(&self, i: usize) -> Option<Ratio<i128>> {
        self.exact[i]
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn entries(&self) -> Vec<ScoreEntry> {
        self.models
            .iter()
            .enumerate()
            .map(|(i, m)| ScoreEntry {
                model: m.clone(),
                mwr: self.values[i],
                exact: self.exact[i].map(|r| format!("{}/{}", r.numer(), r.denom())),
            })
            .collect()
    }

    fn cmp_desc(&self, a: usize, b: usize) -> Ordering {
        let by_value = match (self.exact[a], self.exact[b]) {
            (Some(x), Some(y)) => y.cmp(&x),
            _ => self.values[b].total_cmp(&self.values[a]),
        };
        by_value.then_with(|| self.models[a].cmp(&self.models[b]))
    }

    fn tied(&self, a: usize, b: usize) -> bool {
        match (self.exact[a], self.exact[b]) {
            (Some(x), Some(y)) => x == y,
            _ => self.values[a] == self.values[b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub model: String,
    pub mwr: f64,
    /// Exact value as `numerator/denominator`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

/// Sums `numerators[k] / denominators[k]` and divides by `total_weight`,
/// returning `None` on 128-bit overflow.
fn exact_mean(terms: &[(u64, u64)], total_weight: u64) -> Option<Ratio<i128>> {
    let mut acc_num: i128 = 0;
    let mut acc_den: i128 = 1;
    for &(num, den) in terms {
        let (num, den) = (num as i128, den as i128);
        let g = gcd(acc_den, den);
        let lcm = (acc_den / g).checked_mul(den)?;
        acc_num = acc_num
            .checked_mul(lcm / acc_den)?
            .checked_add(num.checked_mul(lcm / den)?)?;
        acc_den = lcm;
        let r = gcd(acc_num.abs(), acc_den);
        if r > 1 {
            acc_num /= r;
            acc_den /= r;
        }
    }
    Some(Ratio::new(acc_num, acc_den.checked_mul(total_weight as i128)?))
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// MWR over pre-computed unit scores for the models in `subset`.
pub fn mwr_from_units(
    units: &UnitScores,
    subset: &[usize],
    grouping: Grouping,
    tie: TiePolicy,
) -> Result<ScoreTable, ScoringError> {
    if subset.len() < 2 {
        return Err(ScoringError::TooFewModels(subset.len()));
    }
    let fractions = unit_win_fractions(units, subset, tie);
    let mut values = Vec::with_capacity(subset.len());
    let mut exact = Vec::with_capacity(subset.len());
    for (k, &m) in subset.iter().enumerate() {
        // Group weighted credit by opponent count so the rational sum stays small.
        let mut by_opponents: Vec<u64> = vec![0; subset.len()];
        let mut total_weight = 0u64;
        let mut float_sum = 0.0;
        for (u, frac) in fractions[k].iter().enumerate() {
            let Some(f) = frac else { continue };
            let w = units.units[u].weight as u64;
            by_opponents[f.opponents as usize] += w * f.credit;
            total_weight += w;
            float_sum += w as f64 * f.credit as f64 / (2.0 * f.opponents as f64);
        }
        if total_weight == 0 {
            return Err(ScoringError::NoCommonScenario(units.models[m].clone()));
        }
        let terms: Vec<(u64, u64)> = by_opponents
            .iter()
            .enumerate()
            .filter(|(o, _)| *o > 0)
            .map(|(o, &num)| (num, 2 * o as u64))
            .filter(|(num, _)| *num > 0)
            .collect();
        let ex = if terms.is_empty() {
            Some(Ratio::zero())
        } else {
            exact_mean(&terms, total_weight)
        };
        values.push(match ex {
            Some(r) => r.to_f64().unwrap_or(float_sum / total_weight as f64),
            None => float_sum / total_weight as f64,
        });
        exact.push(ex);
    }
    Ok(ScoreTable {
        models: subset.iter().map(|&m| units.models[m].clone()).collect(),
        values,
        exact,
        grouping,
        tie_policy: tie,
        selection: None,
    })
}

/// Resolves model names to dataset indices.
pub fn model_indices<S: AsRef<str>>(
    data: &BenchmarkData,
    models: &[S],
) -> Result<Vec<usize>, ScoringError> {
    let mut idx = models
        .iter()
        .map(|m| {
            data.model_index(m.as_ref())
                .ok_or_else(|| ScoringError::UnknownModel(m.as_ref().to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

/// MWR of the given models on the selected data.
pub fn mean_win_rate<S: AsRef<str>>(
    data: &BenchmarkData,
    models: &[S],
    grouping: Grouping,
    selection: &Selection,
    tie: TiePolicy,
) -> Result<ScoreTable, ScoringError> {
    let subset = model_indices(data, models)?;
    let units = UnitScores::compute(data, grouping, selection);
    let mut table = mwr_from_units(&units, &subset, grouping, tie)?;
    table.selection = Some(selection.summary(data));
    Ok(table)
}

/// Models ordered best first.
#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub order: Vec<String>,
    pub table: ScoreTable,
    /// Indices into `table.models`, best first.
    pub order_idx: Vec<usize>,
    /// Whether two models had exactly equal MWR and the id decided.
    pub tie_break_applied: bool,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based rank of a model.
    pub fn rank_of(&self, model: &str) -> Option<usize> {
        self.order.iter().position(|m| m == model).map(|p| p + 1)
    }

    /// 1-based ranks indexed like `table.models`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.order_idx.len()];
        for (pos, &i) in self.order_idx.iter().enumerate() {
            r[i] = pos + 1;
        }
        r
    }

    /// Builds a ranking from an explicit order with no scores attached.
    pub fn from_order<S: AsRef<str>>(order: &[S]) -> Self {
        let models: Vec<String> = order.iter().map(|m| m.as_ref().to_string()).collect();
        let n = models.len();
        Ranking {
            order: models.clone(),
            order_idx: (0..n).collect(),
            table: ScoreTable {
                values: (0..n).map(|i| 1.0 - i as f64 / n.max(1) as f64).collect(),
                exact: vec![None; n],
                models,
                grouping: Grouping::ByScenario,
                tie_policy: TiePolicy::Strict,
                selection: None,
            },
            tie_break_applied: false,
        }
    }
}

/// Sorts by MWR descending; exact ties go to the lexicographically smaller id.
pub fn ranking(scores: &ScoreTable) -> Ranking {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores.cmp_desc(a, b));
    let tie_break_applied = idx.windows(2).any(|w| scores.tied(w[0], w[1]));
    Ranking {
        order: idx.iter().map(|&i| scores.models[i].clone()).collect(),
        order_idx: idx,
        table: scores.clone(),
        tie_break_applied,
    }
}

/// Name → position lookup helper shared by the metrics.
pub(crate) fn position_map(order: &[String]) -> HashMap<&str, usize> {
    order.iter().enumerate().map(|(i, m)| (m.as_str(), i)).collect()
}
