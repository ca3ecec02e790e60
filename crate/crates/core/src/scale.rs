//! Ordinal trust levels mapped to positive-evidence fractions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Result, TrustError};
use crate::opinion::Opinion;

/// Fraction assigned to the highest level by default.
pub const HIGHEST_FRACTION: f64 = 0.9;

/// Ordered level names (lowest first) with strictly increasing fractions r_k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelScale {
    names: Vec<String>,
    fractions: Vec<f64>,
}

impl LevelScale {
    pub fn new(names: Vec<String>, fractions: Vec<f64>) -> Result<Self> {
        if names.len() != fractions.len() {
            return Err(TrustError::InvalidParameter(format!(
                "{} level names but {} fractions",
                names.len(),
                fractions.len()
            )));
        }
        if names.len() < 2 {
            return Err(TrustError::InvalidParameter(
                "a scale needs at least two levels".into(),
            ));
        }
        if fractions.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(TrustError::InvalidParameter(format!(
                "level fractions must lie in (0, 1): {fractions:?}"
            )));
        }
        if fractions.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TrustError::InvalidParameter(format!(
                "level fractions must be strictly increasing: {fractions:?}"
            )));
        }
        Ok(Self { names, fractions })
    }

    /// Builds the scale from per-level counts by normal-score transformation.
    ///
    /// Each level gets the z-score of its mid-rank cumulative frequency; the
    /// inner levels are placed linearly in z between `lowest` and `highest`.
    pub fn from_counts(names: Vec<String>, counts: &[u64], lowest: f64, highest: f64) -> Result<Self> {
        if names.len() != counts.len() {
            return Err(TrustError::InvalidParameter(format!(
                "{} level names but {} counts",
                names.len(),
                counts.len()
            )));
        }
        if counts.len() < 2 {
            return Err(TrustError::InvalidParameter(
                "a scale needs at least two levels".into(),
            ));
        }
        if !(lowest > 0.0 && lowest < highest && highest < 1.0) {
            return Err(TrustError::InvalidParameter(format!(
                "need 0 < lowest < highest < 1, got lowest={lowest} highest={highest}"
            )));
        }
        if let Some(k) = counts.iter().position(|&c| c == 0) {
            return Err(TrustError::InvalidParameter(format!(
                "level `{}` has no observations; its normal score is undefined",
                names[k]
            )));
        }
        let z = normal_scores(counts);
        if z.windows(2).any(|w| w[1] <= w[0]) {
            return Err(TrustError::InvalidParameter(format!(
                "normal scores are not increasing: {z:?}"
            )));
        }
        let (z0, zl) = (z[0], z[z.len() - 1]);
        let last = z.len() - 1;
        let fractions = z
            .iter()
            .enumerate()
            .map(|(k, &zk)| match k {
                0 => lowest,
                k if k == last => highest,
                _ => lowest + (zk - z0) / (zl - z0) * (highest - lowest),
            })
            .collect();
        Self::new(names, fractions)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn fractions(&self) -> &[f64] {
        &self.fractions
    }

    pub fn fraction(&self, level: usize) -> f64 {
        self.fractions[level]
    }

    pub fn name(&self, level: usize) -> &str {
        &self.names[level]
    }

    /// Resolves a level by name, falling back to an integer index.
    pub fn level_index(&self, token: &str) -> Option<usize> {
        resolve_level(&self.names, token)
    }

    /// Level whose fraction is closest to `value`; exact midpoints go down.
    pub fn nearest_level(&self, value: f64) -> usize {
        self.fractions
            .windows(2)
            .position(|w| value <= 0.5 * (w[0] + w[1]))
            .unwrap_or(self.fractions.len() - 1)
    }
}

pub(crate) fn resolve_level(names: &[String], token: &str) -> Option<usize> {
    names
        .iter()
        .position(|n| n == token)
        .or_else(|| token.parse::<usize>().ok().filter(|&k| k < names.len()))
}

/// Mid-rank normal scores z_k = Φ⁻¹((below_k + count_k / 2) / N).
pub fn normal_scores(counts: &[u64]) -> Vec<f64> {
    let n: u64 = counts.iter().sum();
    let std_normal = Normal::standard();
    let mut below = 0u64;
    counts
        .iter()
        .map(|&c| {
            let p = (below as f64 + c as f64 / 2.0) / n as f64;
            below += c;
            std_normal.inverse_cdf(p)
        })
        .collect()
}

/// [`LevelScale::from_counts`] with levels named by index.
pub fn build_scale(level_counts: &[u64], lowest_fraction: f64, highest_fraction: f64) -> Result<LevelScale> {
    let names = (0..level_counts.len()).map(|k| k.to_string()).collect();
    LevelScale::from_counts(names, level_counts, lowest_fraction, highest_fraction)
}

/// How an ordinal level becomes an evidence triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceStyle {
    /// ⟨λr, λ(1−r), 0⟩: low trust means negative evidence (Advogato-like).
    PositiveNegative,
    /// ⟨λr, 0, λ(1−r)⟩: low trust means uncertainty (PGP-like).
    PositiveUncertain,
}

impl EvidenceStyle {
    pub fn opinion(self, fraction: f64, lambda: f64) -> Result<Opinion> {
        let pos = lambda * fraction;
        let rest = lambda - pos;
        match self {
            EvidenceStyle::PositiveNegative => Opinion::new(pos, rest, 0.0),
            EvidenceStyle::PositiveUncertain => Opinion::new(pos, 0.0, rest),
        }
    }

    /// Level names used when none are given.
    pub fn default_level_names(self) -> Vec<String> {
        let names: &[&str] = match self {
            EvidenceStyle::PositiveNegative => &["observer", "apprentice", "journeyer", "master"],
            EvidenceStyle::PositiveUncertain => &["0", "1", "2", "3"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Conventional lowest fraction for this style.
    pub fn default_lowest_fraction(self) -> f64 {
        match self {
            EvidenceStyle::PositiveNegative => 0.3,
            EvidenceStyle::PositiveUncertain => 0.1,
        }
    }
}

impl FromStr for EvidenceStyle {
    type Err = TrustError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "positive-negative" | "pn" | "advogato" => Ok(Self::PositiveNegative),
            "positive-uncertain" | "pu" | "pgp" => Ok(Self::PositiveUncertain),
            other => Err(TrustError::InvalidParameter(format!(
                "unknown evidence style `{other}` (expected positive-negative or positive-uncertain)"
            ))),
        }
    }
}

impl fmt::Display for EvidenceStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvidenceStyle::PositiveNegative => "positive-negative",
            EvidenceStyle::PositiveUncertain => "positive-uncertain",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Φ⁻¹(0.625) and Φ⁻¹(0.875), frozen from an independent quantile routine.
    const Z_625: f64 = 0.318_639_363_964_375_1;
    const Z_875: f64 = 1.150_349_380_376_008;

    #[test]
    fn four_equal_levels() {
        let z = normal_scores(&[1, 1, 1, 1]);
        for (got, want) in z.iter().zip([-Z_875, -Z_625, Z_625, Z_875]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-9);
        }
        let s = build_scale(&[1, 1, 1, 1], 0.1, HIGHEST_FRACTION).unwrap();
        let step = (Z_875 - Z_625) / (2.0 * Z_875) * 0.8;
        let r = s.fractions();
        assert_abs_diff_eq!(r[0], 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1], 0.1 + step, epsilon = 1e-9);
        assert_abs_diff_eq!(r[2], 0.9 - step, epsilon = 1e-9);
        assert_abs_diff_eq!(r[1], 0.389_202_578_138_400_5, epsilon = 1e-9);
        assert_abs_diff_eq!(r[1] + r[2], 1.0, epsilon = 1e-12);
        assert_eq!(r[3], 0.9);
    }

    #[test]
    fn two_levels_are_the_endpoints() {
        let s = build_scale(&[7, 7], 0.3, HIGHEST_FRACTION).unwrap();
        assert_eq!(s.fractions(), &[0.3, 0.9]);
    }

    #[test]
    fn skewed_counts_stay_monotone_and_bounded() {
        let s = build_scale(&[5, 200, 30, 1], 0.2, HIGHEST_FRACTION).unwrap();
        let r = s.fractions();
        assert!(r.windows(2).all(|w| w[1] > w[0]));
        assert!(r.iter().all(|&x| x > 0.0 && x <= 0.9));
        assert_eq!(*r.last().unwrap(), 0.9);
    }

    #[test]
    fn zero_count_is_an_error() {
        assert!(build_scale(&[3, 0, 2, 1], 0.1, 0.9).is_err());
        assert!(build_scale(&[3], 0.1, 0.9).is_err());
        assert!(build_scale(&[3, 3], 0.95, 0.9).is_err());
    }

    #[test]
    fn nearest_level_rounds_midpoints_down() {
        let s = LevelScale::new(vec!["lo".into(), "hi".into()], vec![0.2, 0.6]).unwrap();
        assert_eq!(s.nearest_level(0.0), 0);
        assert_eq!(s.nearest_level(0.4), 0);
        assert_eq!(s.nearest_level(0.400_001), 1);
        assert_eq!(s.nearest_level(0.99), 1);
    }

    #[test]
    fn level_lookup_by_name_or_index() {
        let s = LevelScale::new(
            EvidenceStyle::PositiveNegative.default_level_names(),
            vec![0.3, 0.5, 0.7, 0.9],
        )
        .unwrap();
        assert_eq!(s.level_index("master"), Some(3));
        assert_eq!(s.level_index("1"), Some(1));
        assert_eq!(s.level_index("4"), None);
        assert_eq!(s.level_index("guru"), None);
    }

    #[test]
    fn rejects_unsorted_fractions() {
        assert!(LevelScale::new(vec!["a".into(), "b".into()], vec![0.5, 0.5]).is_err());
        assert!(LevelScale::new(vec!["a".into(), "b".into()], vec![0.0, 0.5]).is_err());
    }

    #[test]
    fn style_parsing() {
        assert_eq!("pgp".parse::<EvidenceStyle>().unwrap(), EvidenceStyle::PositiveUncertain);
        assert_eq!(
            "Positive-Negative".parse::<EvidenceStyle>().unwrap(),
            EvidenceStyle::PositiveNegative
        );
        assert!("both".parse::<EvidenceStyle>().is_err());
    }

    #[test]
    fn style_opinions() {
        let o = EvidenceStyle::PositiveNegative.opinion(0.9, 30.0).unwrap();
        assert_abs_diff_eq!(o.alpha(), 27.0, epsilon = 1e-12);
        assert_abs_diff_eq!(o.beta(), 3.0, epsilon = 1e-12);
        assert_eq!(o.gamma(), 0.0);
        let o = EvidenceStyle::PositiveUncertain.opinion(0.3, 30.0).unwrap();
        assert_abs_diff_eq!(o.alpha(), 9.0, epsilon = 1e-12);
        assert_eq!(o.beta(), 0.0);
        assert_abs_diff_eq!(o.gamma(), 21.0, epsilon = 1e-12);
    }
}
