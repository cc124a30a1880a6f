//! Reference implementations written without any of the library's
//! shortcuts, plus small random instance generators.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use benchrel::data::ScoreRecord;
use num_rational::Ratio;
use rand::Rng;

pub type Q = Ratio<i128>;

fn q(v: f64) -> Q {
    assert_eq!(v.fract(), 0.0, "oracle instances use integer scores");
    Q::from_integer(v as i128)
}

/// Exact unit scores computed directly from the records:
/// unit -> model -> score.
pub fn unit_scores(records: &[ScoreRecord], by_subscenario: bool) -> BTreeMap<String, BTreeMap<String, Q>> {
    let mut cells: BTreeMap<(String, String), Vec<Q>> = BTreeMap::new();
    let mut scenario_of = BTreeMap::new();
    for r in records {
        cells
            .entry((r.subscenario.clone(), r.model.clone()))
            .or_default()
            .push(q(r.score));
        scenario_of.insert(r.subscenario.clone(), r.scenario.clone());
    }
    let mut per_unit: BTreeMap<String, BTreeMap<String, Vec<Q>>> = BTreeMap::new();
    for ((sub, model), vals) in cells {
        let mean = vals.iter().sum::<Q>() / Q::from_integer(vals.len() as i128);
        let unit = if by_subscenario { sub.clone() } else { scenario_of[&sub].clone() };
        per_unit.entry(unit).or_default().entry(model).or_default().push(mean);
    }
    per_unit
        .into_iter()
        .map(|(u, ms)| {
            let avg = ms
                .into_iter()
                .map(|(m, v)| {
                    let n = Q::from_integer(v.len() as i128);
                    (m, v.into_iter().sum::<Q>() / n)
                })
                .collect();
            (u, avg)
        })
        .collect()
}

/// Pairwise enumeration of the mean win rate. `Err` names a model with no
/// unit shared with an opponent.
pub fn brute_mwr(
    records: &[ScoreRecord],
    models: &[String],
    by_subscenario: bool,
    half: bool,
) -> Result<BTreeMap<String, Q>, String> {
    let units = unit_scores(records, by_subscenario);
    let mut out = BTreeMap::new();
    for m in models {
        let mut fractions = Vec::new();
        for scores in units.values() {
            let Some(mine) = scores.get(m) else { continue };
            let mut wins = Q::from_integer(0);
            let mut opponents = 0;
            for o in models {
                if o == m {
                    continue;
                }
                let Some(theirs) = scores.get(o) else { continue };
                opponents += 1;
                if mine > theirs {
                    wins += 1;
                } else if mine == theirs && half {
                    wins += Q::new(1, 2);
                }
            }
            if opponents > 0 {
                fractions.push(wins / Q::from_integer(opponents));
            }
        }
        if fractions.is_empty() {
            return Err(m.clone());
        }
        let n = Q::from_integer(fractions.len() as i128);
        out.insert(m.clone(), fractions.into_iter().sum::<Q>() / n);
    }
    Ok(out)
}

/// Plain O(n^2) Kendall τ between two orders of the same items.
pub fn kendall_oracle(a: &[String], b: &[String]) -> f64 {
    let pos: BTreeMap<&str, usize> = b.iter().enumerate().map(|(i, m)| (m.as_str(), i)).collect();
    let n = a.len();
    let (mut c, mut d) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            if pos[a[i].as_str()] < pos[a[j].as_str()] {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    (c - d) as f64 / (n * (n - 1) / 2) as f64
}

/// Weighted τ anchored on `a`: each pair weighted by `1/(p_i+1) + 1/(p_j+1)`
/// with positions taken in `a`.
pub fn weighted_anchored(a: &[String], b: &[String]) -> Q {
    let pos: BTreeMap<&str, usize> = b.iter().enumerate().map(|(i, m)| (m.as_str(), i)).collect();
    let n = a.len();
    let (mut num, mut den) = (Q::from_integer(0), Q::from_integer(0));
    for i in 0..n {
        for j in i + 1..n {
            let w = Q::new(1, i as i128 + 1) + Q::new(1, j as i128 + 1);
            let concordant = pos[a[i].as_str()] < pos[a[j].as_str()];
            num += if concordant { w } else { -w };
            den += w;
        }
    }
    num / den
}

/// Symmetrized weighted τ: the mean of both anchored values.
pub fn weighted_oracle(a: &[String], b: &[String]) -> f64 {
    use num_traits::ToPrimitive;
    ((weighted_anchored(a, b) + weighted_anchored(b, a)) / Q::from_integer(2))
        .to_f64()
        .unwrap()
}

pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    let mut v: Vec<String> = (0..n).map(|i| format!("m{i:02}")).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

/// Small random benchmark with integer scores. Whole (model, subscenario)
/// submissions are dropped at random; example and prompt counts are 1 or 2
/// so every mean is exact in binary floating point.
pub fn random_instance<R: Rng>(rng: &mut R) -> Vec<ScoreRecord> {
    let n_models = rng.random_range(2..=5);
    let n_scen = rng.random_range(1..=4);
    let mut recs = Vec::new();
    for s in 0..n_scen {
        let n_sub = rng.random_range(1..=3);
        for t in 0..n_sub {
            let ne = rng.random_range(1..=2);
            let np = rng.random_range(1..=2);
            for m in 0..n_models {
                if rng.random_bool(0.15) {
                    continue;
                }
                for e in 0..ne {
                    for p in 0..np {
                        recs.push(ScoreRecord::new(
                            format!("m{m}"),
                            format!("S{s}"),
                            format!("S{s}.{t}"),
                            format!("p{p}"),
                            format!("e{e}"),
                            rng.random_range(0..=3) as f64,
                        ));
                    }
                }
            }
        }
    }
    recs
}

pub fn models_of(records: &[ScoreRecord]) -> Vec<String> {
    records.iter().map(|r| r.model.clone()).collect::<BTreeSet<_>>().into_iter().collect()
}
