//! Meta-metrics comparing two benchmark outcomes.
//!
//! Every metric comes with a similarity in [0, 1], which is what the
//! resampling engine aggregates.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::scoring::{position_map, Ranking, ScoreTable};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("DomainMismatch: {0}")]
    DomainMismatch(String),
    #[error("OutOfRange: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetaMetricKind {
    Kendall,
    WeightedKendall,
    AgreementIndicator,
    MwrSimilarity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaMetricValue {
    pub kind: MetaMetricKind,
    pub value: f64,
    pub similarity: f64,
}

impl MetaMetricValue {
    /// A rank correlation in [-1, 1], mapped to `(value + 1) / 2`.
    pub fn correlation(kind: MetaMetricKind, value: f64) -> Self {
        Self {
            kind,
            value,
            similarity: (value + 1.0) / 2.0,
        }
    }

    /// 1 when the top pair kept its order, 0 when it switched.
    pub fn agreement(agree: bool) -> Self {
        let v = if agree { 1.0 } else { 0.0 };
        Self {
            kind: MetaMetricKind::AgreementIndicator,
            value: v,
            similarity: v,
        }
    }

    pub fn mwr(similarity: f64) -> Self {
        Self {
            kind: MetaMetricKind::MwrSimilarity,
            value: similarity,
            similarity,
        }
    }
}

/// Positions of `b`'s models, listed in `a`'s order: `seq[i]` is where the
/// model at `a[i]` sits in `b`.
fn aligned(a: &Ranking, b: &Ranking) -> Result<Vec<usize>, MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::DomainMismatch(format!(
            "rankings have {} and {} models",
            a.len(),
            b.len()
        )));
    }
    if a.table.models == b.table.models {
        let mut pos_b = vec![0; b.len()];
        for (p, &i) in b.order_idx.iter().enumerate() {
            pos_b[i] = p;
        }
        return Ok(a.order_idx.iter().map(|&i| pos_b[i]).collect());
    }
    let pos_b = position_map(&b.order);
    a.order
        .iter()
        .map(|m| {
            pos_b
                .get(m.as_str())
                .copied()
                .ok_or_else(|| MetricError::DomainMismatch(format!("model {m} missing")))
        })
        .collect()
}

fn check_len(n: usize) -> Result<(), MetricError> {
    if n < 2 {
        return Err(MetricError::DomainMismatch(format!(
            "need at least 2 ranked models, got {n}"
        )));
    }
    Ok(())
}

/// Number of inversions in `seq`, by merge sort.
fn inversions(seq: &mut [usize], buf: &mut Vec<usize>) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = inversions(&mut seq[..mid], buf) + inversions(&mut seq[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf.push(seq[i]);
            i += 1;
        } else {
            buf.push(seq[j]);
            count += (mid - i) as u64;
            j += 1;
        }
    }
    buf.extend_from_slice(&seq[i..mid]);
    buf.extend_from_slice(&seq[j..]);
    seq.copy_from_slice(buf);
    count
}

/// Kendall's τ over position sequences (no ties): `(C - D) / (n(n-1)/2)`.
pub fn kendall_from_positions(seq: &[usize]) -> f64 {
    let n = seq.len() as u64;
    let pairs = n * (n - 1) / 2;
    let mut work = seq.to_vec();
    let discordant = inversions(&mut work, &mut Vec::with_capacity(seq.len()));
    (pairs as i64 - 2 * discordant as i64) as f64 / pairs as f64
}

pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<f64, MetricError> {
    let seq = aligned(r1, r2)?;
    check_len(seq.len())?;
    Ok(kendall_from_positions(&seq))
}

fn lcm_upto(n: usize) -> Option<i128> {
    let mut l: i128 = 1;
    for k in 2..=n as i128 {
        let (mut a, mut b) = (l, k);
        while b != 0 {
            (a, b) = (b, a % b);
        }
        l = (l / a).checked_mul(k)?;
    }
    Some(l)
}

/// Per-element net concordance: for the element at anchor position `p`,
/// (pairs it keeps in order) − (pairs it inverts) in the other ranking.
fn net_concordance(seq: &[usize]) -> Vec<i64> {
    let n = seq.len();
    let mut net = vec![0i64; n];
    for p in 0..n {
        for q in p + 1..n {
            let s = if seq[p] < seq[q] { 1 } else { -1 };
            net[p] += s;
            net[q] += s;
        }
    }
    net
}

/// Inverse of a permutation.
fn invert(seq: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; seq.len()];
    for (i, &p) in seq.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Weighted τ with additive hyperbolic weights `1/(p+1)` on zero-based
/// positions, symmetrized by averaging the values weighted by each ranking.
/// Exact integer arithmetic is used whenever `lcm(1..=n)` fits in 128 bits.
pub fn weighted_from_positions(seq: &[usize]) -> f64 {
    let n = seq.len();
    // Anchored on the first ranking, then on the second (inverse permutation).
    let net_a = net_concordance(seq);
    let net_b = net_concordance(&invert(seq));
    if let Some(l) = lcm_upto(n) {
        let exact = || -> Option<Ratio<i128>> {
            let mut num: i128 = 0;
            let mut weight_sum: i128 = 0;
            for p in 0..n {
                let w = l / (p as i128 + 1);
                num = num.checked_add(w.checked_mul(net_a[p] as i128 + net_b[p] as i128)?)?;
                weight_sum = weight_sum.checked_add(w)?;
            }
            let den = weight_sum.checked_mul(2 * (n as i128 - 1))?;
            Some(Ratio::new(num, den))
        };
        if let Some(r) = exact().and_then(|r| r.to_f64()) {
            return r;
        }
    }
    let w = |p: usize| 1.0 / (p as f64 + 1.0);
    let num: f64 = (0..n).map(|p| w(p) * (net_a[p] + net_b[p]) as f64).sum();
    let den: f64 = (0..n).map(w).sum::<f64>() * 2.0 * (n as f64 - 1.0);
    num / den
}

pub fn weighted_kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<f64, MetricError> {
    let seq = aligned(r1, r2)?;
    check_len(seq.len())?;
    Ok(weighted_from_positions(&seq))
}

/// 1 iff the models at 1-based reference positions `anchor` and
/// `anchor + cluster_size - 1` appear in inverted order in `r_alt`.
pub fn cluster_switch(
    r_ref: &Ranking,
    r_alt: &Ranking,
    anchor: usize,
    cluster_size: usize,
) -> Result<u8, MetricError> {
    let seq = aligned(r_ref, r_alt)?;
    switch_in_positions(&seq, anchor, cluster_size)
}

pub(crate) fn switch_in_positions(
    seq: &[usize],
    anchor: usize,
    cluster_size: usize,
) -> Result<u8, MetricError> {
    let n = seq.len();
    if cluster_size < 2 || anchor < 1 || anchor + cluster_size > n + 1 {
        return Err(MetricError::OutOfRange(format!(
            "anchor {anchor} with cluster size {cluster_size} does not fit {n} models"
        )));
    }
    let top = anchor - 1;
    let bottom = anchor + cluster_size - 2;
    Ok(u8::from(seq[top] > seq[bottom]))
}

/// Per-model absolute MWR differences and their mean-based similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MwrSimilarity {
    pub similarity: f64,
    pub per_model: Vec<(String, f64)>,
}

/// `1 - mean |MWR₁(m) - MWR₂(m)|` over the shared model domain.
pub fn mwr_similarity(s1: &ScoreTable, s2: &ScoreTable) -> Result<MwrSimilarity, MetricError> {
    if s1.len() != s2.len() {
        return Err(MetricError::DomainMismatch(format!(
            "score tables have {} and {} models",
            s1.len(),
            s2.len()
        )));
    }
    if s1.is_empty() {
        return Err(MetricError::DomainMismatch("empty score tables".into()));
    }
    let per_model: Vec<(String, f64)> = if s1.models == s2.models {
        s1.models
            .iter()
            .zip(s1.values.iter().zip(&s2.values))
            .map(|(m, (a, b))| (m.clone(), (a - b).abs()))
            .collect()
    } else {
        s1.models
            .iter()
            .zip(&s1.values)
            .map(|(m, a)| {
                s2.get(m)
                    .map(|b| (m.clone(), (a - b).abs()))
                    .ok_or_else(|| MetricError::DomainMismatch(format!("model {m} missing")))
            })
            .collect::<Result<_, _>>()?
    };
    let mean = per_model.iter().map(|(_, d)| d).sum::<f64>() / per_model.len() as f64;
    Ok(MwrSimilarity {
        similarity: (1.0 - mean).clamp(0.0, 1.0),
        per_model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(order: &[&str]) -> Ranking {
        Ranking::from_order(order)
    }

    #[test]
    fn kendall_examples() {
        let a = r(&["A", "B", "C", "D", "E"]);
        let rev = r(&["E", "D", "C", "B", "A"]);
        assert_eq!(kendall_tau(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall_tau(&a, &rev).unwrap(), -1.0);
        let four = r(&["A", "B", "C", "D"]);
        let swapped = r(&["A", "C", "B", "D"]);
        assert_eq!(kendall_tau(&four, &swapped).unwrap(), 4.0 / 6.0);
    }

    #[test]
    fn kendall_domain_checks() {
        assert!(matches!(
            kendall_tau(&r(&["A", "B"]), &r(&["A", "C"])),
            Err(MetricError::DomainMismatch(_))
        ));
        assert!(kendall_tau(&r(&["A", "B"]), &r(&["A", "B", "C"])).is_err());
        assert!(kendall_tau(&r(&["A"]), &r(&["A"])).is_err());
    }

    #[test]
    fn weighted_anchors_and_top_emphasis() {
        let a = r(&["A", "B", "C", "D", "E"]);
        assert_eq!(weighted_kendall_tau(&a, &a).unwrap(), 1.0);
        assert_eq!(weighted_kendall_tau(&a, &r(&["E", "D", "C", "B", "A"])).unwrap(), -1.0);
        let top = weighted_kendall_tau(&a, &r(&["B", "A", "C", "D", "E"])).unwrap();
        let bottom = weighted_kendall_tau(&a, &r(&["A", "B", "C", "E", "D"])).unwrap();
        assert!(top < bottom, "{top} vs {bottom}");
        let b = r(&["C", "A", "E", "B", "D"]);
        assert_eq!(
            weighted_kendall_tau(&a, &b).unwrap(),
            weighted_kendall_tau(&b, &a).unwrap()
        );
    }

    #[test]
    fn weighted_float_fallback_agrees() {
        // n large enough that lcm(1..=n) overflows i128 takes the float path.
        let n = 120;
        assert!(lcm_upto(n).is_none());
        let seq: Vec<usize> = (0..n).rev().collect();
        assert!((weighted_from_positions(&seq) + 1.0).abs() < 1e-12);
        let id: Vec<usize> = (0..n).collect();
        assert!((weighted_from_positions(&id) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cluster_switch_examples() {
        let abc = r(&["A", "B", "C"]);
        assert_eq!(cluster_switch(&abc, &abc, 1, 2).unwrap(), 0);
        assert_eq!(cluster_switch(&abc, &abc, 1, 3).unwrap(), 0);
        assert_eq!(cluster_switch(&abc, &r(&["B", "A", "C"]), 1, 2).unwrap(), 1);
        let abcd = r(&["A", "B", "C", "D"]);
        assert_eq!(cluster_switch(&abcd, &r(&["C", "B", "A", "D"]), 1, 3).unwrap(), 1);
        assert_eq!(cluster_switch(&abcd, &r(&["C", "B", "A", "D"]), 2, 3).unwrap(), 0);
        assert!(matches!(cluster_switch(&abc, &abc, 2, 3), Err(MetricError::OutOfRange(_))));
        assert!(cluster_switch(&abc, &abc, 1, 1).is_err());
        assert!(cluster_switch(&abc, &abc, 0, 2).is_err());
    }

    #[test]
    fn mwr_similarity_examples() {
        let mut a = r(&["A", "B"]).table;
        let mut b = a.clone();
        a.values = vec![0.6, 0.4];
        b.values = vec![0.5, 0.5];
        let s = mwr_similarity(&a, &b).unwrap();
        assert!((s.similarity - 0.9).abs() < 1e-12);
        assert_eq!(mwr_similarity(&a, &a).unwrap().similarity, 1.0);
        a.values = vec![1.0, 0.0];
        b.values = vec![0.0, 1.0];
        assert_eq!(mwr_similarity(&a, &b).unwrap().similarity, 0.0);
    }
}
