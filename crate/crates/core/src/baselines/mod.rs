//! Comparison algorithms: TidalTrust for absolute trust values, EigenTrust and
//! TrustRank for relative rankings.

mod rank;
mod tidal;

pub use rank::{eigen_trust, trust_rank, RankParams, RankScores};
pub use tidal::{tidal_trust, tidal_trust_with};

pub(crate) use rank::power_iteration;
pub(crate) use tidal::tidal_indexed;

use crate::opinion::Opinion;

/// Scalar trust of an edge for the baselines: α / (α + β + γ).
pub fn edge_value(op: &Opinion) -> f64 {
    op.positive_fraction()
}
