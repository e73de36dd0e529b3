//! Solution-quality statistics: the scale-invariant deviation metric and
//! the one-sided Wilcoxon signed-rank test used to benchmark the heuristic.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("cost + revenue of the reference solution is zero; deviation undefined")]
    ZeroScale,
    #[error("no observations")]
    Empty,
}

/// Deviation between a heuristic and a reference solution measured against
/// the reference's cost plus revenue. Comparing raw objectives is unstable
/// because cost and revenue nearly cancel: a 1% cost error can flip a small
/// objective by 100%.
pub fn normalized_deviation(
    heuristic_cost: f64,
    heuristic_revenue: f64,
    exact_cost: f64,
    exact_revenue: f64,
) -> Result<f64, StatsError> {
    let scale = exact_cost + exact_revenue;
    if scale == 0.0 {
        return Err(StatsError::ZeroScale);
    }
    Ok(((heuristic_cost - exact_cost).abs() + (heuristic_revenue - exact_revenue).abs()) / scale)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonOutcome {
    /// Sum of the ranks of positive differences.
    pub statistic: f64,
    /// One-sided p-value for H1: median > threshold.
    pub p_value: f64,
    /// Observations kept after dropping exact zeros.
    pub n_used: usize,
    /// Every difference was zero; p = 1 by convention.
    pub all_zero: bool,
}

/// One-sided Wilcoxon signed-rank test of H0: median(x) <= threshold
/// against H1: median(x) > threshold.
///
/// Differences of exactly zero are dropped; ties among absolute
/// differences get average ranks. The null distribution is enumerated
/// exactly for n <= 12 and approximated normally (with tie correction and
/// continuity correction) beyond.
pub fn wilcoxon_one_sided(observations: &[f64], threshold: f64) -> Result<WilcoxonOutcome, StatsError> {
    if observations.is_empty() {
        return Err(StatsError::Empty);
    }
    let diffs: Vec<f64> = observations
        .iter()
        .map(|x| x - threshold)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.is_empty() {
        return Ok(WilcoxonOutcome {
            statistic: 0.0,
            p_value: 1.0,
            n_used: 0,
            all_zero: true,
        });
    }
    let n = diffs.len();
    let ranks = average_ranks(&diffs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| *r)
        .sum();

    let p_value = if n <= 12 {
        exact_upper_tail(&ranks, w_plus)
    } else {
        normal_upper_tail(&ranks, n, w_plus)
    };
    Ok(WilcoxonOutcome {
        statistic: w_plus,
        p_value,
        n_used: n,
        all_zero: false,
    })
}

/// Ranks of |d| in ascending order with average ranks for ties.
fn average_ranks(diffs: &[f64]) -> Vec<f64> {
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| diffs[a].abs().total_cmp(&diffs[b].abs()));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && diffs[order[j + 1]].abs() == diffs[order[i]].abs() {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0; // ranks are 1-based
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// P(W+ >= observed) by enumerating all sign assignments.
fn exact_upper_tail(ranks: &[f64], observed: f64) -> f64 {
    let n = ranks.len();
    let total = 1u64 << n;
    let mut count = 0u64;
    for mask in 0..total {
        let mut w = 0.0;
        for (i, r) in ranks.iter().enumerate() {
            if mask & (1 << i) != 0 {
                w += r;
            }
        }
        if w >= observed - 1e-12 {
            count += 1;
        }
    }
    count as f64 / total as f64
}

fn normal_upper_tail(ranks: &[f64], n: usize, observed: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    // Tie correction: subtract sum(t^3 - t)/48 over tie groups.
    let mut sorted: Vec<f64> = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    let z = (observed - mean - 0.5) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    1.0 - normal.cdf(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_of_identical_results_is_zero() {
        assert_eq!(normalized_deviation(1e8, 9e7, 1e8, 9e7).unwrap(), 0.0);
    }

    #[test]
    fn one_percent_cost_error_stays_small() {
        // cost 1.01e8 vs 1.00e8 at equal revenue 1.00e8.
        let d = normalized_deviation(1.00e8, 1.00e8, 1.01e8, 1.00e8).unwrap();
        assert!((d - 1e6 / 2.01e8).abs() < 1e-12);
        // The naive objective ratio on the same pair would be 100%.
        let naive = ((1.00e8 - 1.00e8) - (1.01e8 - 1.00e8)) as f64 / 1e6;
        assert!((naive.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_scale_flagged() {
        assert_eq!(
            normalized_deviation(1.0, 1.0, 0.0, 0.0),
            Err(StatsError::ZeroScale)
        );
    }

    #[test]
    fn all_below_threshold_fails_to_reject() {
        let xs = vec![0.01, 0.02, 0.0, 0.03, 0.04, 0.02, 0.01, 0.02, 0.03, 0.04];
        let out = wilcoxon_one_sided(&xs, 0.05).unwrap();
        assert_eq!(out.statistic, 0.0);
        assert!((out.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn five_values_above_threshold() {
        let xs = vec![0.06, 0.07, 0.08, 0.09, 0.10];
        let out = wilcoxon_one_sided(&xs, 0.05).unwrap();
        assert_eq!(out.statistic, 15.0);
        assert!((out.p_value - 1.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn all_zero_differences() {
        let xs = vec![0.05; 4];
        let out = wilcoxon_one_sided(&xs, 0.05).unwrap();
        assert!(out.all_zero);
        assert_eq!(out.p_value, 1.0);
    }

    #[test]
    fn exact_matches_published_table_shapes() {
        // With n = 10 distinct ranks, P(W >= 28) = 0.5 by symmetry around
        // 27.5, and P(W >= 5) = 1 - 7/1024.
        let xs: Vec<f64> = (1..=10).map(|i| 0.05 + i as f64 * 0.001).collect();
        let out = wilcoxon_one_sided(&xs, 0.05).unwrap();
        assert_eq!(out.statistic, 55.0);
        let ranks: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert!((exact_upper_tail(&ranks, 28.0) - 0.5).abs() < 1e-12);
        assert!((exact_upper_tail(&ranks, 5.0) - (1.0 - 7.0 / 1024.0)).abs() < 1e-12);
        assert!((exact_upper_tail(&ranks, 30.0) - 0.4229).abs() < 5e-5);
    }
}
