//! Synthetic benchmarks with controllable structure, and small hand-built
//! instances where MWR behaves counter-intuitively.
//!
//! A generated score is
//! `spread[j] * (latent[m] + interaction[m, j] + prompt[m, j, p])
//!  - difficulty[j] + example[j, e] + item[m, j, e] + noise`, mapped to `[0, 1]` by the affine squash
//! `(x - lo) / (hi - lo)` and clamped. Each component draws standard normals
//! from its own stream, so changing one variance rescales that component
//! without reshuffling the others.

use num_rational::Ratio;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{BenchmarkData, DataError, ScoreRecord};
use crate::resampling::iteration_rng;
use crate::scoring::{Grouping, TiePolicy};

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
    #[error("UnknownCase: {0} (expected add_model, combine_datasets or partial_report)")]
    UnknownCase(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSpec {
    pub models: usize,
    /// Latent quality per model, best first by convention. When empty,
    /// qualities are evenly spaced from `latent_range[1]` down to
    /// `latent_range[0]`.
    pub latent: Vec<f64>,
    pub latent_range: [f64; 2],
    /// Number of subscenarios in each scenario.
    pub layout: Vec<usize>,
    pub examples: usize,
    pub prompts: usize,
    /// Difficulty offset per subscenario. Drawn with `difficulty_var` when
    /// empty.
    pub difficulty: Vec<f64>,
    pub difficulty_var: f64,
    /// Model-specific offset per (subscenario, prompt).
    pub prompt_var: f64,
    pub noise_var: f64,
    /// Model-specific offset per subscenario.
    pub interaction_var: f64,
    /// Offset per example shared by all models.
    pub example_var: f64,
    /// Model-specific offset per example, shared by that example's prompts.
    pub item_var: f64,
    /// Variance of `ln spread[j]`, the per-subscenario multiplier on the
    /// model-specific terms.
    pub spread_var: f64,
    /// Affine squash bounds.
    pub squash: [f64; 2],
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            models: 10,
            latent: Vec::new(),
            latent_range: [-1.0, 1.0],
            layout: vec![2, 2, 1],
            examples: 100,
            prompts: 1,
            difficulty: Vec::new(),
            difficulty_var: 0.0,
            prompt_var: 0.0,
            noise_var: 1.0,
            interaction_var: 0.0,
            example_var: 0.0,
            item_var: 0.0,
            spread_var: 0.0,
            squash: [-6.0, 6.0],
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn from_toml(text: &str) -> Result<Self, SynthError> {
        let spec: Self = toml::from_str(text).map_err(|e| SynthError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Latent qualities of the 37 reference models: 21 closely spaced
    /// leaders followed by a sparser tail with four times the gap.
    pub fn reference_latent() -> Vec<f64> {
        let gap = 0.2 / 36.0;
        (0..37)
            .map(|i: usize| -gap * i.min(20) as f64 - 4.0 * gap * i.saturating_sub(20) as f64)
            .collect()
    }

    /// 37 models over 12 single-subscenario scenarios of 1000 examples.
    /// Neighbours among the leaders swap often under resampling while
    /// clusters of five rarely do.
    pub fn reference(seed: u64) -> Self {
        Self {
            models: 37,
            latent: Self::reference_latent(),
            layout: vec![1; 12],
            examples: 1000,
            prompts: 1,
            noise_var: 0.25,
            squash: [-3.0, 3.0],
            seed,
            ..Self::default()
        }
    }

    /// The reference benchmark plus one extra model per entry of `ranks`,
    /// placed halfway between reference models `rank - 1` and `rank` so that
    /// its latent rank among the reference and itself is `rank`. Returns the
    /// spec and the names of the added models.
    pub fn reference_with_newcomers(seed: u64, ranks: &[usize]) -> Result<(Self, Vec<String>), SynthError> {
        let mut spec = Self::reference(seed);
        let base = Self::reference_latent();
        for &r in ranks {
            if r == 0 || r > base.len() + 1 {
                return Err(SynthError::InvalidSpec(format!("newcomer rank {r} outside 1..={}", base.len() + 1)));
            }
            let above = if r == 1 { base[0] + 0.1 } else { base[r - 2] };
            let below = if r > base.len() { base[base.len() - 1] - 0.1 } else { base[r - 1] };
            spec.latent.push((above + below) / 2.0);
        }
        spec.models = spec.latent.len();
        let names = spec.model_names()[base.len()..].to_vec();
        Ok((spec, names))
    }

    /// Subscenarios of very different score spread and model ordering: two
    /// scenarios of 24 subscenarios each next to four standalone ones.
    pub fn heterogeneous(seed: u64) -> Self {
        Self {
            models: 16,
            layout: vec![24, 24, 1, 1, 1, 1],
            examples: 100,
            prompts: 1,
            interaction_var: 0.09,
            spread_var: 2.0,
            noise_var: 0.001,
            squash: [-4.0, 4.0],
            seed,
            ..Self::default()
        }
    }

    pub fn n_subscenarios(&self) -> usize {
        self.layout.iter().sum()
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if self.models == 0 || self.examples == 0 || self.prompts == 0 || self.layout.is_empty() {
            return bad("models, examples, prompts and layout must be non-empty".into());
        }
        if self.layout.contains(&0) {
            return bad("every scenario needs at least one subscenario".into());
        }
        if !self.latent.is_empty() && self.latent.len() != self.models {
            return bad(format!("{} latent values for {} models", self.latent.len(), self.models));
        }
        if !self.difficulty.is_empty() && self.difficulty.len() != self.n_subscenarios() {
            return bad(format!(
                "{} difficulty values for {} subscenarios",
                self.difficulty.len(),
                self.n_subscenarios()
            ));
        }
        for (name, v) in [
            ("difficulty_var", self.difficulty_var),
            ("prompt_var", self.prompt_var),
            ("noise_var", self.noise_var),
            ("interaction_var", self.interaction_var),
            ("example_var", self.example_var),
            ("item_var", self.item_var),
            ("spread_var", self.spread_var),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be a finite non-negative number"));
            }
        }
        if self.latent.iter().chain(&self.difficulty).any(|v| !v.is_finite()) {
            return bad("latent and difficulty values must be finite".into());
        }
        if !(self.squash[1] > self.squash[0]) || self.squash.iter().any(|v| !v.is_finite()) {
            return bad("squash bounds must be finite with lo < hi".into());
        }
        Ok(())
    }

    pub fn latent_values(&self) -> Vec<f64> {
        if !self.latent.is_empty() {
            return self.latent.clone();
        }
        let [lo, hi] = self.latent_range;
        if self.models == 1 {
            return vec![hi];
        }
        (0..self.models)
            .map(|i| hi - (hi - lo) * i as f64 / (self.models - 1) as f64)
            .collect()
    }

    pub fn model_names(&self) -> Vec<String> {
        let width = (self.models.max(2) - 1).to_string().len().max(2);
        (0..self.models).map(|i| format!("m{i:0width$}")).collect()
    }
}

/// Draws `n` standard normals from stream `stream` of `seed`.
fn normals(seed: u64, stream: u64, n: usize, sd: f64) -> Vec<f64> {
    let mut rng = iteration_rng(seed, stream);
    (0..n)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sd * z
        })
        .collect()
}

pub fn generate(spec: &SynthSpec) -> Result<BenchmarkData, SynthError> {
    spec.validate()?;
    let n = spec.models;
    let n_sub = spec.n_subscenarios();
    let (ne, np) = (spec.examples, spec.prompts);
    let latent = spec.latent_values();
    let names = spec.model_names();
    let seed = spec.seed;

    let difficulty = if spec.difficulty.is_empty() {
        normals(seed, 0, n_sub, spec.difficulty_var.sqrt())
    } else {
        spec.difficulty.clone()
    };
    let interaction = normals(seed, 1, n * n_sub, spec.interaction_var.sqrt());
    let prompt = normals(seed, 2, n * n_sub * np, spec.prompt_var.sqrt());
    let example = normals(seed, 3, n_sub * ne, spec.example_var.sqrt());
    let item = if spec.item_var > 0.0 {
        normals(seed, 6, n * n_sub * ne, spec.item_var.sqrt())
    } else {
        vec![0.0; n * n_sub * ne]
    };
    let spread: Vec<f64> = normals(seed, 5, n_sub, spec.spread_var.sqrt())
        .into_iter()
        .map(f64::exp)
        .collect();
    let noise_sd = spec.noise_var.sqrt();
    let mut noise_rng = iteration_rng(seed, 4);
    let [lo, hi] = spec.squash;

    let sw = (spec.layout.len().max(2) - 1).to_string().len().max(2);
    let ew = (ne.max(2) - 1).to_string().len().max(3);
    let prompt_names: Vec<String> = (0..np).map(|p| format!("p{p}")).collect();
    let example_names: Vec<String> = (0..ne).map(|e| format!("e{e:0ew$}")).collect();

    let mut records = Vec::with_capacity(n * n_sub * ne * np);
    let mut j = 0;
    for (s, &k) in spec.layout.iter().enumerate() {
        let scenario = format!("s{s:0sw$}");
        for t in 0..k {
            let sub = format!("{scenario}.{t}");
            for e in 0..ne {
                for p in 0..np {
                    for m in 0..n {
                        let z: f64 = StandardNormal.sample(&mut noise_rng);
                        let raw = spread[j]
                            * (latent[m]
                                + interaction[m * n_sub + j]
                                + prompt[(m * n_sub + j) * np + p])
                            - difficulty[j]
                            + example[j * ne + e]
                            + item[(m * n_sub + j) * ne + e]
                            + noise_sd * z;
                        let score = ((raw - lo) / (hi - lo)).clamp(0.0, 1.0);
                        records.push(ScoreRecord {
                            model: names[m].clone(),
                            scenario: scenario.clone(),
                            subscenario: sub.clone(),
                            prompt_id: prompt_names[p].clone(),
                            example_id: example_names[e].clone(),
                            score,
                        });
                    }
                }
            }
            j += 1;
        }
    }
    Ok(BenchmarkData::from_records(records)?)
}

/// One configuration of a worked case and the MWR it must produce.
#[derive(Debug, Clone)]
pub struct CaseVariant {
    pub label: String,
    pub data: BenchmarkData,
    pub models: Vec<String>,
    pub grouping: Grouping,
    pub tie_policy: TiePolicy,
    pub expected: Vec<(String, Ratio<i64>)>,
    /// Expected win fraction per unit (in unit order), where stated.
    pub expected_unit_win_rates: Vec<(String, Vec<Ratio<i64>>)>,
}

#[derive(Debug, Clone)]
pub struct AppendixCase {
    pub name: String,
    pub variants: Vec<CaseVariant>,
}

pub const CASE_NAMES: [&str; 3] = ["add_model", "combine_datasets", "partial_report"];

/// One record per (model, unit) with the unit as its own scenario unless
/// `scenario_of` maps it elsewhere.
fn unit_data(
    scores: &[(&str, &[f64])],
    units: &[&str],
    scenario_of: impl Fn(&str) -> String,
) -> BenchmarkData {
    let mut recs = Vec::new();
    for (m, row) in scores {
        for (u, &v) in units.iter().zip(row.iter()) {
            if v.is_nan() {
                continue;
            }
            recs.push(ScoreRecord::new(*m, scenario_of(u), *u, "p0", "e0", v));
        }
    }
    BenchmarkData::from_records(recs).expect("constructed case is valid")
}

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn names(ms: &[&str]) -> Vec<String> {
    ms.iter().map(|m| m.to_string()).collect()
}

pub fn appendix_case(name: &str) -> Result<AppendixCase, SynthError> {
    let variants = match name {
        "add_model" => {
            let units = ["S1", "S2", "S3"];
            let data = unit_data(
                &[
                    ("A", &[10.0, 10.0, 10.0]),
                    ("B", &[12.0, 12.0, 8.0]),
                    ("C", &[9.0, 9.0, 9.0]),
                ],
                &units,
                |u| u.to_string(),
            );
            vec![
                CaseVariant {
                    label: "without_c".into(),
                    data: data.clone(),
                    models: names(&["A", "B"]),
                    grouping: Grouping::ByScenario,
                    tie_policy: TiePolicy::Strict,
                    expected: vec![("A".into(), r(1, 3)), ("B".into(), r(2, 3))],
                    expected_unit_win_rates: vec![
                        ("A".into(), vec![r(0, 1), r(0, 1), r(1, 1)]),
                        ("B".into(), vec![r(1, 1), r(1, 1), r(0, 1)]),
                    ],
                },
                CaseVariant {
                    label: "with_c".into(),
                    data,
                    models: names(&["A", "B", "C"]),
                    grouping: Grouping::ByScenario,
                    tie_policy: TiePolicy::Strict,
                    expected: vec![
                        ("A".into(), r(2, 3)),
                        ("B".into(), r(2, 3)),
                        ("C".into(), r(1, 6)),
                    ],
                    expected_unit_win_rates: vec![
                        ("A".into(), vec![r(1, 2), r(1, 2), r(1, 1)]),
                        ("B".into(), vec![r(1, 1), r(1, 1), r(0, 1)]),
                    ],
                },
            ]
        }
        "combine_datasets" => {
            let units = ["d1", "d2", "d3", "d4"];
            let data = unit_data(
                &[("A", &[1.0, 1.0, 0.0, 0.0]), ("B", &[0.0, 0.0, 1.0, 1.0])],
                &units,
                |u| if u == "d1" || u == "d2" { "G".into() } else { u.to_string() },
            );
            vec![
                CaseVariant {
                    label: "standalone".into(),
                    data: data.clone(),
                    models: names(&["A", "B"]),
                    grouping: Grouping::BySubscenario,
                    tie_policy: TiePolicy::Strict,
                    expected: vec![("A".into(), r(1, 2)), ("B".into(), r(1, 2))],
                    expected_unit_win_rates: Vec::new(),
                },
                CaseVariant {
                    label: "grouped".into(),
                    data,
                    models: names(&["A", "B"]),
                    grouping: Grouping::ByScenario,
                    tie_policy: TiePolicy::Strict,
                    expected: vec![("A".into(), r(1, 3)), ("B".into(), r(2, 3))],
                    expected_unit_win_rates: Vec::new(),
                },
            ]
        }
        "partial_report" => {
            // A is second on S1 and S2 and last on S3; B is third everywhere.
            let units = ["S1", "S2", "S3"];
            let mut rows: Vec<(String, Vec<f64>)> = vec![
                ("A".into(), vec![10.0, 10.0, 0.0]),
                ("B".into(), vec![9.0, 9.0, 9.0]),
                ("C1".into(), vec![11.0, 11.0, 11.0]),
                ("C2".into(), vec![8.0, 8.0, 10.0]),
            ];
            for c in 3..=9 {
                let v = 10.0 - c as f64;
                rows.push((format!("C{c}"), vec![v, v, v + 1.0]));
            }
            let full: Vec<(&str, &[f64])> = rows.iter().map(|(m, v)| (m.as_str(), v.as_slice())).collect();
            let all: Vec<String> = rows.iter().map(|(m, _)| m.clone()).collect();
            let data = unit_data(&full, &units, |u| u.to_string());
            let mut a_partial = rows.clone();
            a_partial[0].1[2] = f64::NAN;
            let partial: Vec<(&str, &[f64])> =
                a_partial.iter().map(|(m, v)| (m.as_str(), v.as_slice())).collect();
            let omitted = unit_data(&partial, &units, |u| u.to_string());
            vec![
                CaseVariant {
                    label: "full".into(),
                    data,
                    models: all.clone(),
                    grouping: Grouping::ByScenario,
                    tie_policy: TiePolicy::Strict,
                    expected: vec![("A".into(), r(3, 5)), ("B".into(), r(4, 5))],
                    expected_unit_win_rates: vec![
                        ("A".into(), vec![r(9, 10), r(9, 10), r(0, 1)]),
                        ("B".into(), vec![r(4, 5), r(4, 5), r(4, 5)]),
                    ],
                },
                CaseVariant {
                    label: "omitted".into(),
                    data: omitted,
                    models: all,
                    grouping: Grouping::ByScenario,
                    tie_policy: TiePolicy::Strict,
                    // B now faces nine opponents on S3 and beats seven.
                    expected: vec![("A".into(), r(9, 10)), ("B".into(), r(107, 135))],
                    expected_unit_win_rates: vec![("A".into(), vec![r(9, 10), r(9, 10)])],
                },
            ]
        }
        other => return Err(SynthError::UnknownCase(other.to_string())),
    };
    Ok(AppendixCase {
        name: name.to_string(),
        variants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(SynthSpec::default().validate().is_ok());
        let bad = SynthSpec {
            noise_var: -1.0,
            ..SynthSpec::default()
        };
        assert!(matches!(bad.validate(), Err(SynthError::InvalidSpec(_))));
        let bad = SynthSpec {
            layout: vec![1, 0],
            ..SynthSpec::default()
        };
        assert!(generate(&bad).is_err());
        assert!(matches!(appendix_case("nope"), Err(SynthError::UnknownCase(_))));
    }

    #[test]
    fn toml_config() {
        let spec = SynthSpec::from_toml("models = 4\nlayout = [1, 3]\nexamples = 5\nnoise_var = 0.5\nseed = 9\n").unwrap();
        assert_eq!(spec.models, 4);
        assert_eq!(spec.n_subscenarios(), 4);
        assert_eq!(spec.prompts, 1);
        assert!(SynthSpec::from_toml("modles = 4").is_err());
    }

    #[test]
    fn generated_shape() {
        let spec = SynthSpec {
            models: 3,
            layout: vec![2, 1],
            examples: 4,
            prompts: 2,
            ..SynthSpec::default()
        };
        let data = generate(&spec).unwrap();
        assert_eq!(data.models(), ["m00", "m01", "m02"]);
        assert_eq!(data.n_scenarios(), 2);
        assert_eq!(data.subscenarios().len(), 3);
        assert_eq!(data.record_count(), 3 * 3 * 4 * 2);
        assert!(data.records().all(|r| (0.0..=1.0).contains(&r.score)));
    }
}
