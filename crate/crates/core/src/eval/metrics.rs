//! Scoring: confusion matrices and F1, Kendall's tau-b, normal fits.

use std::cmp::Ordering;

use serde::Serialize;
use statrs::statistics::Statistics;

use crate::error::{Result, TrustError};

/// Square confusion matrix; rows are true levels, columns predicted levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn from_counts(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = labels.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(TrustError::InvalidParameter(format!(
                "confusion matrix must be {n}x{n}"
            )));
        }
        Ok(Self { labels, counts })
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.counts[truth][predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.counts.len())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// Micro-averaged F1, which for single-label data is the accuracy.
    pub fn f1_micro(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        let hits: u64 = (0..self.counts.len()).map(|k| self.counts[k][k]).sum();
        hits as f64 / total as f64
    }

    /// Per-level F1; `None` for a level that is neither true nor predicted.
    pub fn f1_per_class(&self) -> Vec<Option<f64>> {
        let rows = self.row_sums();
        let cols = self.column_sums();
        (0..self.counts.len())
            .map(|k| {
                let tp = self.counts[k][k];
                let fp = cols[k] - tp;
                let fneg = rows[k] - tp;
                let denom = 2 * tp + fp + fneg;
                (denom > 0).then(|| 2.0 * tp as f64 / denom as f64)
            })
            .collect()
    }

    /// Unweighted mean of the per-level F1 over levels that occur.
    pub fn f1_macro(&self) -> f64 {
        let present: Vec<f64> = self.f1_per_class().into_iter().flatten().collect();
        if present.is_empty() {
            0.0
        } else {
            present.iter().sum::<f64>() / present.len() as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalFit {
    pub mean: f64,
    pub std: f64,
}

/// Sample mean and sample standard deviation (n − 1 denominator).
pub fn fit_error_distribution(errors: &[f64]) -> Result<NormalFit> {
    if errors.len() < 2 {
        return Err(TrustError::InsufficientSamples {
            what: "error samples",
            needed: 2,
            found: errors.len(),
        });
    }
    Ok(NormalFit {
        mean: errors.mean(),
        std: errors.std_dev(),
    })
}

fn sign(a: f64, b: f64) -> i8 {
    match a.partial_cmp(&b) {
        Some(Ordering::Less) => -1,
        Some(Ordering::Greater) => 1,
        _ => 0,
    }
}

/// Kendall's tau-b. `None` when either side is constant or the lengths differ.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mut concordant, mut discordant, mut tied_x, mut tied_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let sx = sign(x[i], x[j]);
            let sy = sign(y[i], y[j]);
            match (sx, sy) {
                (0, 0) => {}
                (0, _) => tied_x += 1,
                (_, 0) => tied_y += 1,
                _ if sx == sy => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let pairs = concordant + discordant;
    let denom = (((pairs + tied_x) * (pairs + tied_y)) as f64).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some(((concordant - discordant) as f64 / denom).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub value: f64,
    pub fraction: f64,
}

/// Empirical CDF: one point per distinct value, fraction of samples ≤ value.
pub fn empirical_cdf(samples: &[f64]) -> Vec<CdfPoint> {
    let mut sorted: Vec<f64> = samples.iter().copied().filter(|v| !v.is_nan()).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<CdfPoint> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        let fraction = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.value == v => last.fraction = fraction,
            _ => out.push(CdfPoint { value: v, fraction }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn two_level_f1() {
        let m = ConfusionMatrix::from_counts(labels(2), vec![vec![2, 1], vec![0, 3]]).unwrap();
        assert_abs_diff_eq!(m.f1_micro(), 5.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.f1_macro(), (0.8 + 6.0 / 7.0) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn perfect_and_constant_predictors() {
        let mut perfect = ConfusionMatrix::new(labels(4));
        let mut constant = ConfusionMatrix::new(labels(4));
        for k in 0..4 {
            for _ in 0..5 {
                perfect.record(k, k);
                constant.record(k, 0);
            }
        }
        assert_eq!(perfect.f1_micro(), 1.0);
        assert_eq!(perfect.f1_macro(), 1.0);
        assert_eq!(constant.f1_micro(), 0.25);
    }

    #[test]
    fn absent_levels_do_not_dilute_macro_f1() {
        let m = ConfusionMatrix::from_counts(labels(3), vec![vec![4, 0, 0], vec![0, 0, 0], vec![0, 0, 2]]).unwrap();
        assert_eq!(m.f1_per_class(), vec![Some(1.0), None, Some(1.0)]);
        assert_eq!(m.f1_macro(), 1.0);
    }

    #[test]
    fn malformed_matrix_is_rejected() {
        assert!(ConfusionMatrix::from_counts(labels(2), vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn normal_fit_examples() {
        let f = fit_error_distribution(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!((f.mean, f.std), (0.0, 0.0));
        let f = fit_error_distribution(&[-1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(f.mean, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.std, 2f64.sqrt(), epsilon = 1e-15);
        let f = fit_error_distribution(&[0.1, 0.2, 0.3]).unwrap();
        assert_abs_diff_eq!(f.mean, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(f.std, 0.1, epsilon = 1e-15);
        assert!(fit_error_distribution(&[1.0]).is_err());
    }

    #[test]
    fn tau_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau_b(&x, &x), Some(1.0));
        assert_eq!(kendall_tau_b(&x, &[4.0, 3.0, 2.0, 1.0]), Some(-1.0));
        assert_abs_diff_eq!(
            kendall_tau_b(&x, &[2.0, 1.0, 3.0, 4.0]).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(kendall_tau_b(&x, &[1.0; 4]), None);
    }

    #[test]
    fn tau_b_with_ties() {
        // scipy.stats.kendalltau([1, 2, 2, 3], [1, 2, 3, 3]) = 0.8
        let t = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 3.0]).unwrap();
        assert_abs_diff_eq!(t, 0.8, epsilon = 1e-12);
    }

    #[test]
    fn cdf_steps() {
        let c = empirical_cdf(&[0.5, -1.0, 0.5, 1.0]);
        let pts: Vec<(f64, f64)> = c.iter().map(|p| (p.value, p.fraction)).collect();
        assert_eq!(pts, vec![(-1.0, 0.25), (0.5, 0.75), (1.0, 1.0)]);
        assert!(empirical_cdf(&[]).is_empty());
    }
}
