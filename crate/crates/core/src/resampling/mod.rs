//! Random instantiations of benchmark design decisions.
//!
//! An instantiation redraws one axis of the benchmark (scenarios,
//! subscenarios, examples, or example/prompt pairs) either with replacement
//! (bootstrap) or without (subsample) and expresses the result as a
//! [`Selection`]. Every iteration owns its random stream, derived from the
//! master seed and the iteration index, so results do not depend on how
//! iterations are scheduled across threads.

mod correlations;
mod curves;
mod dior;
mod prompts;

pub use correlations::{subscenario_rank_correlations, CorrelationMatrix};
pub use curves::{
    best_model_error_rate, cluster_error_curve, Anchors, BestModelConfig, BestModelReport,
    BestModelRepetition, ClusterCurve, ClusterCurveConfig, CurvePoint,
};
pub use dior::{dior, dior_many, summarize, DiorConfig, DiorResult, Objective};
pub use prompts::{
    prompt_strategy_compare, ModelInterval, PairingStrategy, PromptCompareConfig,
    PromptComparison, StrategyRow,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::data::BenchmarkData;
use crate::metrics::MetricError;
use crate::scoring::{PairSet, ScoringError, Selection};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResampleError {
    #[error("UnknownAxis: {0} (expected scenarios, subscenarios, examples or prompt_pairing)")]
    UnknownAxis(String),
    #[error("UnknownObjective: {0}")]
    UnknownObjective(String),
    #[error("InvalidSize: {0}")]
    InvalidSize(String),
    #[error("SizeExceedsPool: {axis} size {size} exceeds pool of {pool}")]
    SizeExceedsPool { axis: Axis, size: usize, pool: usize },
    #[error("TooFewIterations: need at least 100 iterations, got {0}")]
    TooFewIterations(usize),
    #[error("DegenerateObjective: need at least 2 models, got {0}")]
    DegenerateObjective(usize),
    #[error("InsufficientModels: need at least {needed} models, got {got}")]
    InsufficientModels { needed: usize, got: usize },
    #[error("NoEligibleSubscenario: no subscenario has two or more distinct prompts")]
    NoEligibleSubscenario,
    #[error("BudgetExceedsCrossProduct: budget {budget} exceeds the {cells} example/prompt pairs of {subscenario}")]
    BudgetExceedsCrossProduct {
        subscenario: String,
        budget: usize,
        cells: usize,
    },
    #[error("BudgetBelowPromptCount: budget {budget} is smaller than the {prompts} prompts of {subscenario}")]
    BudgetBelowPromptCount {
        subscenario: String,
        budget: usize,
        prompts: usize,
    },
    #[error("UnknownSubscenario: {0}")]
    UnknownSubscenario(String),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The design decision being redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Scenarios,
    Subscenarios,
    /// Sizes count examples per scenario.
    Examples,
    /// Sizes count example/prompt pairs per subscenario.
    PromptPairing,
}

impl Axis {
    pub const ALL: [Axis; 4] = [
        Axis::Scenarios,
        Axis::Subscenarios,
        Axis::Examples,
        Axis::PromptPairing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Scenarios => "scenarios",
            Axis::Subscenarios => "subscenarios",
            Axis::Examples => "examples",
            Axis::PromptPairing => "prompt_pairing",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = ResampleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s || (s == "prompts" && *a == Axis::PromptPairing))
            .ok_or_else(|| ResampleError::UnknownAxis(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// With replacement.
    #[default]
    Bootstrap,
    /// Without replacement.
    Subsample,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Bootstrap => "bootstrap",
            Mode::Subsample => "subsample",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bootstrap" => Ok(Mode::Bootstrap),
            "subsample" => Ok(Mode::Subsample),
            _ => Err(format!("unknown mode {s} (expected bootstrap or subsample)")),
        }
    }
}

/// How many elements an instantiation draws. `Full` is the original count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SampleSize {
    Count(usize),
    #[default]
    Full,
}

impl SampleSize {
    pub fn count(self) -> Option<usize> {
        match self {
            SampleSize::Count(n) => Some(n),
            SampleSize::Full => None,
        }
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Count(n) => write!(f, "{n}"),
            SampleSize::Full => f.write_str("max"),
        }
    }
}

impl FromStr for SampleSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("max") || s.eq_ignore_ascii_case("full") {
            return Ok(SampleSize::Full);
        }
        s.parse::<usize>()
            .map(SampleSize::Count)
            .map_err(|_| format!("invalid size {s:?} (expected a positive integer or \"max\")"))
    }
}

impl Serialize for SampleSize {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SampleSize::Count(n) => s.serialize_u64(*n as u64),
            SampleSize::Full => s.serialize_str("max"),
        }
    }
}

impl<'de> Deserialize<'de> for SampleSize {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(SampleSize::Count(n)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// SplitMix64 step, used to derive independent seeds from one master seed.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    let mut z = master ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The random stream of one iteration.
pub fn iteration_rng(seed: u64, iteration: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration);
    rng
}

/// One redraw of a design decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Instantiation {
    pub axis: Axis,
    pub mode: Mode,
    pub size: SampleSize,
    pub seed: u64,
    pub iteration: u64,
    /// Drawn identifiers with multiplicity. For the examples and pairing
    /// axes, the number of draws per subscenario.
    pub drawn: Vec<(String, u32)>,
    pub selection: Selection,
}

/// Splits `size` over pools proportionally to their sizes (largest
/// remainder). Every pool gets at least one element when `size` allows.
/// With `cap`, no pool gets more than it holds.
pub fn allocate(size: usize, pools: &[usize], cap: bool) -> Vec<usize> {
    let total: usize = pools.iter().sum();
    if pools.is_empty() {
        return Vec::new();
    }
    if cap && size >= total {
        return pools.to_vec();
    }
    let (mut alloc, rest) = if size >= pools.len() {
        (vec![1; pools.len()], size - pools.len())
    } else {
        (vec![0; pools.len()], size)
    };
    hamilton(rest, pools, &mut alloc);
    if cap {
        loop {
            let mut excess = 0;
            for (a, &p) in alloc.iter_mut().zip(pools) {
                if *a > p {
                    excess += *a - p;
                    *a = p;
                }
            }
            if excess == 0 {
                break;
            }
            let room: Vec<usize> = alloc
                .iter()
                .zip(pools)
                .map(|(&a, &p)| if a < p { p } else { 0 })
                .collect();
            hamilton(excess, &room, &mut alloc);
        }
    }
    alloc
}

fn hamilton(amount: usize, weights: &[usize], alloc: &mut [usize]) {
    let total: usize = weights.iter().sum();
    if amount == 0 || total == 0 {
        return;
    }
    let mut given = 0;
    let mut rema: Vec<(u128, usize)> = Vec::with_capacity(weights.len());
    for (j, &w) in weights.iter().enumerate() {
        let q = amount as u128 * w as u128;
        let whole = (q / total as u128) as usize;
        alloc[j] += whole;
        given += whole;
        rema.push((q % total as u128, j));
    }
    rema.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, j) in rema.iter().take(amount - given) {
        alloc[j] += 1;
    }
}

/// Draws instantiations of one axis at one size.
#[derive(Debug, Clone)]
pub struct Resampler<'a> {
    data: &'a BenchmarkData,
    axis: Axis,
    size: SampleSize,
    mode: Mode,
    /// Draws per subscenario for the examples and pairing axes.
    per_sub: Vec<usize>,
}

impl<'a> Resampler<'a> {
    pub fn new(
        data: &'a BenchmarkData,
        axis: Axis,
        size: SampleSize,
        mode: Mode,
    ) -> Result<Self, ResampleError> {
        Self::with_overrides(data, axis, size, mode, &BTreeMap::new())
    }

    /// `overrides` fixes the number of examples drawn from named
    /// subscenarios (examples axis only); other subscenarios keep their
    /// proportional share.
    pub fn with_overrides(
        data: &'a BenchmarkData,
        axis: Axis,
        size: SampleSize,
        mode: Mode,
        overrides: &BTreeMap<String, usize>,
    ) -> Result<Self, ResampleError> {
        if size == SampleSize::Count(0) {
            return Err(ResampleError::InvalidSize("size must be at least 1".into()));
        }
        let pool = pool_size(data, axis);
        if let (Mode::Subsample, SampleSize::Count(n)) = (mode, size) {
            if n > pool {
                return Err(ResampleError::SizeExceedsPool { axis, size: n, pool });
            }
        }
        let subs = data.subscenarios();
        let cap = mode == Mode::Subsample;
        let mut per_sub = vec![0; subs.len()];
        match axis {
            Axis::Examples => {
                for s in 0..data.n_scenarios() {
                    let range = data.scenario_subscenarios(s);
                    let pools: Vec<usize> = range.clone().map(|j| subs[j].n_examples()).collect();
                    let alloc = match size {
                        SampleSize::Full => pools,
                        SampleSize::Count(n) => allocate(n, &pools, cap),
                    };
                    for (j, a) in range.zip(alloc) {
                        per_sub[j] = a;
                    }
                }
            }
            Axis::PromptPairing => {
                for (j, sub) in subs.iter().enumerate() {
                    per_sub[j] = match size {
                        SampleSize::Full => sub.n_cells(),
                        SampleSize::Count(n) if cap => n.min(sub.n_cells()),
                        SampleSize::Count(n) => n,
                    };
                }
            }
            Axis::Scenarios | Axis::Subscenarios => {}
        }
        for (name, &k) in overrides {
            let j = data
                .subscenario_index(name)
                .ok_or_else(|| ResampleError::UnknownSubscenario(name.clone()))?;
            if axis != Axis::Examples {
                return Err(ResampleError::InvalidSize(
                    "per-subscenario overrides apply to the examples axis only".into(),
                ));
            }
            let n = subs[j].n_examples();
            if k == 0 || (cap && k > n) {
                return Err(ResampleError::SizeExceedsPool { axis, size: k, pool: n });
            }
            per_sub[j] = k;
        }
        Ok(Self {
            data,
            axis,
            size,
            mode,
            per_sub,
        })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn size(&self) -> SampleSize {
        self.size
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of draws per subscenario (examples and pairing axes).
    pub fn per_subscenario(&self) -> &[usize] {
        &self.per_sub
    }

    pub fn draw(&self, seed: u64, iteration: u64) -> Instantiation {
        let data = self.data;
        let mut rng = iteration_rng(seed, iteration);
        let mut selection = Selection::full(data);
        let subs = data.subscenarios();
        let drawn = match self.axis {
            Axis::Scenarios | Axis::Subscenarios => {
                let names: Vec<&String> = match self.axis {
                    Axis::Scenarios => data.scenarios().iter().collect(),
                    _ => subs.iter().map(|s| &s.name).collect(),
                };
                let n = names.len();
                let k = self.size.count().unwrap_or(n);
                let counts = draw_counts(&mut rng, n, k, self.mode);
                if self.axis == Axis::Scenarios {
                    selection.set_scenario_weights(counts.clone());
                } else {
                    selection.set_subscenario_weights(counts.clone());
                }
                names
                    .into_iter()
                    .zip(counts)
                    .filter(|(_, c)| *c > 0)
                    .map(|(name, c)| (name.clone(), c))
                    .collect()
            }
            Axis::Examples | Axis::PromptPairing => {
                let mut drawn = Vec::new();
                for (j, sub) in subs.iter().enumerate() {
                    let k = self.per_sub[j];
                    let pool = match self.axis {
                        Axis::Examples => sub.n_examples(),
                        _ => sub.n_cells(),
                    };
                    // A complete subsample is the original data itself.
                    if self.mode == Mode::Subsample && k >= pool {
                        drawn.push((sub.name.clone(), pool as u32));
                        continue;
                    }
                    let counts = draw_counts(&mut rng, pool, k, self.mode);
                    let pairs = match self.axis {
                        Axis::Examples => PairSet::Examples(counts),
                        _ => PairSet::Cells(counts),
                    };
                    selection.set_pairs(j, pairs);
                    drawn.push((sub.name.clone(), k as u32));
                }
                drawn
            }
        };
        Instantiation {
            axis: self.axis,
            mode: self.mode,
            size: self.size,
            seed,
            iteration,
            drawn,
            selection,
        }
    }
}

/// Elements available on one axis. For the examples axis this is the
/// largest scenario; for pairs, the largest subscenario cross product.
pub fn pool_size(data: &BenchmarkData, axis: Axis) -> usize {
    match axis {
        Axis::Scenarios => data.n_scenarios(),
        Axis::Subscenarios => data.subscenarios().len(),
        Axis::Examples => (0..data.n_scenarios())
            .map(|s| data.scenario_pool(s))
            .max()
            .unwrap_or(0),
        Axis::PromptPairing => data
            .subscenarios()
            .iter()
            .map(|s| s.n_cells())
            .max()
            .unwrap_or(0),
    }
}

/// Multiplicity of each of `n` pool elements after drawing `k`.
pub(crate) fn draw_counts(rng: &mut ChaCha8Rng, n: usize, k: usize, mode: Mode) -> Vec<u32> {
    let mut counts = vec![0u32; n];
    match mode {
        Mode::Bootstrap => {
            for _ in 0..k {
                counts[rng.random_range(0..n)] += 1;
            }
        }
        Mode::Subsample => {
            for i in index::sample(rng, n, k.min(n)) {
                counts[i] = 1;
            }
        }
    }
    counts
}

/// One instantiation drawn with iteration index 0.
pub fn resample(
    data: &BenchmarkData,
    axis: Axis,
    size: SampleSize,
    mode: Mode,
    seed: u64,
) -> Result<Instantiation, ResampleError> {
    Ok(Resampler::new(data, axis, size, mode)?.draw(seed, 0))
}

pub(crate) fn check_iterations(b: usize) -> Result<(), ResampleError> {
    if b < 100 {
        return Err(ResampleError::TooFewIterations(b));
    }
    Ok(())
}
