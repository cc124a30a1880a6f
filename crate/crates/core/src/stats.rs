//! Small order-statistic and interval helpers.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

/// `sorted[floor(alpha * n)]`, clamped to the last element.
pub fn lower_quantile(sorted: &[f64], alpha: f64) -> f64 {
    assert!(!sorted.is_empty());
    let i = ((alpha * sorted.len() as f64).floor() as usize).min(sorted.len() - 1);
    sorted[i]
}

/// `sorted[ceil(alpha * n) - 1]`, the upper counterpart of [`lower_quantile`].
pub fn upper_quantile(sorted: &[f64], alpha: f64) -> f64 {
    assert!(!sorted.is_empty());
    let i = ((alpha * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[i]
}

pub fn median(sorted: &[f64]) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sorts a copy with NaN-free total order.
pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Mean with a `mean ± 1.96 · se` band clamped to `[0, 1]`.
pub fn mean_band(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let m = mean(xs);
    if xs.len() < 2 {
        return (m, m, m);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    let half = 1.96 * (var / n).sqrt();
    (m, (m - half).max(0.0), (m + half).min(1.0))
}

/// Interval construction for a binomial proportion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProportionCi {
    /// Normal approximation, clamped to `[0, 1]`.
    #[default]
    Normal,
    /// Exact Clopper–Pearson.
    ClopperPearson,
}

/// 95% two-sided interval for `successes / trials`.
pub fn proportion_ci(successes: u64, trials: u64, method: ProportionCi) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    match method {
        ProportionCi::Normal => {
            let half = 1.96 * (p * (1.0 - p) / n).sqrt();
            ((p - half).max(0.0), (p + half).min(1.0))
        }
        ProportionCi::ClopperPearson => {
            let k = successes as f64;
            let lo = if successes == 0 {
                0.0
            } else {
                Beta::new(k, n - k + 1.0).unwrap().inverse_cdf(0.025)
            };
            let hi = if successes == trials {
                1.0
            } else {
                Beta::new(k + 1.0, n - k).unwrap().inverse_cdf(0.975)
            };
            (lo, hi)
        }
    }
}
