//! Seeded generator of level-labelled trust networks for tests and demos.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};
use crate::io::{RawEdge, RawEdgeList};
use crate::scale::EvidenceStyle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub nodes: usize,
    pub mean_out_degree: usize,
    /// Probability that an edge is answered by a reverse edge.
    pub reciprocity: f64,
    /// Fraction of targets drawn from the most popular tenth of the nodes.
    pub hub_bias: f64,
    pub level_names: Vec<String>,
    /// Relative frequency of each level.
    pub level_weights: Vec<f64>,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            nodes: 500,
            mean_out_degree: 8,
            reciprocity: 0.3,
            hub_bias: 0.3,
            level_names: EvidenceStyle::PositiveNegative.default_level_names(),
            level_weights: vec![0.15, 0.3, 0.35, 0.2],
        }
    }
}

/// Generates a random directed trust network. Equal specs and seeds give
/// identical edge lists, and every level occurs at least once.
pub fn generate(spec: &SyntheticSpec, seed: u64) -> Result<RawEdgeList> {
    let levels = spec.level_names.len();
    if spec.nodes < 2 || spec.mean_out_degree == 0 || spec.mean_out_degree >= spec.nodes {
        return Err(TrustError::InvalidParameter(format!(
            "need at least 2 nodes and 0 < mean out-degree < nodes, got {} and {}",
            spec.nodes, spec.mean_out_degree
        )));
    }
    if levels == 0 || spec.level_weights.len() != levels {
        return Err(TrustError::InvalidParameter(
            "level names and weights must be nonempty and of equal length".into(),
        ));
    }
    for p in [spec.reciprocity, spec.hub_bias] {
        if !(0.0..=1.0).contains(&p) {
            return Err(TrustError::InvalidParameter(format!("probability {p} outside [0, 1]")));
        }
    }
    let level_dist = WeightedIndex::new(&spec.level_weights)
        .map_err(|e| TrustError::InvalidParameter(format!("level weights: {e}")))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = spec.nodes.to_string().len();
    let name = |i: usize| format!("u{i:0width$}");
    let hubs = (spec.nodes / 10).max(1);
    let max_degree = 2 * spec.mean_out_degree - 1;

    let mut edges = Vec::new();
    for u in 0..spec.nodes {
        let degree = rng.random_range(1..=max_degree).min(spec.nodes - 1);
        let mut targets: Vec<usize> = Vec::with_capacity(degree);
        while targets.len() < degree {
            let v = if rng.random::<f64>() < spec.hub_bias {
                rng.random_range(0..hubs)
            } else {
                rng.random_range(0..spec.nodes)
            };
            if v != u && !targets.contains(&v) {
                targets.push(v);
            }
        }
        for v in targets {
            let level = level_dist.sample(&mut rng);
            edges.push(RawEdge {
                src: name(u),
                dst: name(v),
                level,
            });
            if rng.random::<f64>() < spec.reciprocity {
                let back = if rng.random::<bool>() {
                    level
                } else {
                    level_dist.sample(&mut rng)
                };
                edges.push(RawEdge {
                    src: name(v),
                    dst: name(u),
                    level: back,
                });
            }
        }
    }
    let mut list = RawEdgeList::from_edges(spec.level_names.clone(), edges)?;
    list.ensure_all_levels();
    Ok(list)
}
