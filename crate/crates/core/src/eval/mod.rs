//! Evaluation protocols: leave-one-edge-out prediction scored with F1,
//! error-distribution fitting, and neighbour ranking scored with Kendall's
//! tau.

mod experiment;
mod metrics;

pub use experiment::{
    parameter_sweep, run_f1_experiment, run_ranking_experiment, PairRecord, RankingRecord, RuntimeStats,
    SweepEntry,
};
pub use metrics::{
    empirical_cdf, fit_error_distribution, kendall_tau_b, CdfPoint, ConfusionMatrix, NormalFit,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::RankParams;
use crate::error::{Result, TrustError};
use crate::scale::HIGHEST_FRACTION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    /// AssessTrust over three-valued opinions.
    #[serde(rename = "AT")]
    AssessTrust,
    /// AssessTrust's recursion with subjective-logic operators.
    #[serde(rename = "SLSTAR")]
    SlStar,
    #[serde(rename = "TT")]
    TidalTrust,
    #[serde(rename = "ET")]
    EigenTrust,
    #[serde(rename = "TR")]
    TrustRank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::AssessTrust,
        Algorithm::SlStar,
        Algorithm::TidalTrust,
        Algorithm::EigenTrust,
        Algorithm::TrustRank,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Algorithm::AssessTrust => "AT",
            Algorithm::SlStar => "SLSTAR",
            Algorithm::TidalTrust => "TT",
            Algorithm::EigenTrust => "ET",
            Algorithm::TrustRank => "TR",
        }
    }

    /// Whether the algorithm yields an absolute trust value comparable with a
    /// trust level (rather than only a relative score).
    pub fn is_absolute(self) -> bool {
        matches!(
            self,
            Algorithm::AssessTrust | Algorithm::SlStar | Algorithm::TidalTrust
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Algorithm {
    type Err = TrustError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AT" | "ASSESSTRUST" => Ok(Algorithm::AssessTrust),
            "SLSTAR" | "SL*" | "SL" => Ok(Algorithm::SlStar),
            "TT" | "TIDALTRUST" => Ok(Algorithm::TidalTrust),
            "ET" | "EIGENTRUST" => Ok(Algorithm::EigenTrust),
            "TR" | "TRUSTRANK" => Ok(Algorithm::TrustRank),
            _ => Err(TrustError::InvalidParameter(format!(
                "unknown algorithm `{s}` (expected AT, SLSTAR, TT, ET or TR)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Total evidence per edge opinion.
    pub lambda: f64,
    /// Positive-evidence fraction of the lowest trust level.
    pub base_level: f64,
    pub depth: usize,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub num_pairs: usize,
    pub num_ranking_seeds: usize,
    pub rank: RankParams,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, lambda: f64, base_level: f64) -> Self {
        Self {
            lambda,
            base_level,
            depth: 3,
            algorithm,
            seed: 0,
            num_pairs: 200,
            num_ranking_seeds: 100,
            rank: RankParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(TrustError::InvalidParameter(m));
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.base_level > 0.0 && self.base_level < HIGHEST_FRACTION) {
            return bad(format!(
                "base level must lie in (0, {HIGHEST_FRACTION}), got {}",
                self.base_level
            ));
        }
        if self.depth == 0 {
            return bad("depth must be at least 1".into());
        }
        if self.num_pairs == 0 {
            return bad("num_pairs must be at least 1".into());
        }
        if self.num_ranking_seeds == 0 {
            return bad("num_ranking_seeds must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    F1,
    Ranking,
}

/// Everything one experiment produced. Runtime statistics are kept out of the
/// serialized form so repeated runs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    pub levels: Vec<String>,
    pub records: Vec<PairRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confusion: Option<ConfusionMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1_micro: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1_macro: Option<f64>,
    pub errors: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_fit: Option<NormalFit>,
    /// Mean certain evidence α + β of the computed opinions (AT and SL* only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_certain_evidence: Option<f64>,
    pub rankings: Vec<RankingRecord>,
    pub tau: Vec<f64>,
    pub tau_cdf: Vec<CdfPoint>,
    #[serde(skip_serializing)]
    pub runtime: RuntimeStats,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| TrustError::InvalidParameter(format!("report serialization failed: {e}")))
    }

    pub fn mean_tau(&self) -> Option<f64> {
        (!self.tau.is_empty()).then(|| self.tau.iter().sum::<f64>() / self.tau.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_codes_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.code().parse::<Algorithm>().unwrap(), a);
            assert_eq!(serde_json::to_string(&a).unwrap(), format!("\"{}\"", a.code()));
        }
        assert_eq!("sl*".parse::<Algorithm>().unwrap(), Algorithm::SlStar);
        assert!("xx".parse::<Algorithm>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::new(Algorithm::AssessTrust, 30.0, 0.3);
        assert!(ok.validate().is_ok());
        for bad in [
            ExperimentConfig { lambda: 0.0, ..ok.clone() },
            ExperimentConfig { base_level: 0.9, ..ok.clone() },
            ExperimentConfig { base_level: 0.0, ..ok.clone() },
            ExperimentConfig { num_pairs: 0, ..ok.clone() },
            ExperimentConfig { depth: 0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
