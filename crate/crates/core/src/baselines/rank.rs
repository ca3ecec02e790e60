//! EigenTrust and TrustRank by power iteration over the row-normalised trust
//! matrix. Mass on nodes without usable out-edges is returned to the
//! teleport distribution, so every iterate sums to 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::edge_value;
use crate::error::{Result, TrustError};
use crate::graph::TrustGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankParams {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RankParams {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

impl RankParams {
    fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(TrustError::InvalidParameter(format!(
                "damping must lie in (0, 1), got {}",
                self.damping
            )));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(TrustError::InvalidParameter(format!(
                "tolerance must be nonnegative, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankScores {
    ids: Vec<String>,
    scores: Vec<f64>,
    /// L1 distance between successive iterates.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl RankScores {
    pub fn score(&self, id: &str) -> Option<f64> {
        self.ids.iter().position(|x| x == id).map(|i| self.scores[i])
    }

    pub(crate) fn score_at(&self, idx: usize) -> f64 {
        self.scores[idx]
    }

    /// Scores keyed by node id.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        self.ids.iter().cloned().zip(self.scores.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.scores.iter().sum()
    }
}

/// EigenTrust. `pretrusted = None` spreads the teleport mass over all nodes.
pub fn eigen_trust(g: &TrustGraph, pretrusted: Option<&[&str]>, params: RankParams) -> Result<RankScores> {
    match pretrusted {
        None => {
            if g.node_count() == 0 {
                return Err(TrustError::EmptyCollection);
            }
            let p = vec![1.0 / g.node_count() as f64; g.node_count()];
            power_iteration(g, &p, params, None)
        }
        Some(set) => seeded(g, set, params),
    }
}

/// TrustRank: personalised PageRank teleporting only to `seeds`.
pub fn trust_rank(g: &TrustGraph, seeds: &[&str], params: RankParams) -> Result<RankScores> {
    seeded(g, seeds, params)
}

fn seeded(g: &TrustGraph, seeds: &[&str], params: RankParams) -> Result<RankScores> {
    if g.node_count() == 0 || seeds.is_empty() {
        return Err(TrustError::EmptyCollection);
    }
    let mut p = vec![0.0; g.node_count()];
    let mut idx: Vec<usize> = seeds.iter().map(|s| g.require(s)).collect::<Result<_>>()?;
    idx.sort_unstable();
    idx.dedup();
    let share = 1.0 / idx.len() as f64;
    for i in idx {
        p[i] = share;
    }
    power_iteration(g, &p, params, None)
}

/// Iterates t ← (1 − d)·p + d·(Cᵀt + dangling·p) from t = p.
pub(crate) fn power_iteration(
    g: &TrustGraph,
    teleport: &[f64],
    params: RankParams,
    skip: Option<(usize, usize)>,
) -> Result<RankScores> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(TrustError::EmptyCollection);
    }
    let d = params.damping;

    // Row-normalised out-edges.
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|u| {
            let row: Vec<(usize, f64)> = g
                .outgoing_at(u)
                .iter()
                .filter(|&&v| skip != Some((u, v)))
                .filter_map(|&v| g.edge_at(u, v).map(|op| (v, edge_value(op).max(0.0))))
                .filter(|&(_, w)| w > 0.0)
                .collect();
            let total: f64 = row.iter().map(|&(_, w)| w).sum();
            row.into_iter().map(|(v, w)| (v, w / total)).collect()
        })
        .collect();

    let mut t = teleport.to_vec();
    let mut residuals = Vec::new();
    let mut converged = false;
    let mut next = vec![0.0; n];
    while residuals.len() < params.max_iter {
        let dangling: f64 = (0..n).filter(|&u| rows[u].is_empty()).map(|u| t[u]).sum();
        for (x, &p) in next.iter_mut().zip(teleport) {
            *x = (1.0 - d) * p + d * dangling * p;
        }
        for (u, row) in rows.iter().enumerate() {
            let mass = d * t[u];
            for &(v, w) in row {
                next[v] += mass * w;
            }
        }
        let residual: f64 = next.iter().zip(&t).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut t, &mut next);
        residuals.push(residual);
        if residual <= params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::debug!("power iteration stopped after {} iterations", residuals.len());
    }
    Ok(RankScores {
        ids: (0..n).map(|i| g.node_id(i).to_string()).collect(),
        scores: t,
        iterations: residuals.len(),
        residuals,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opinion::Opinion;
    use approx::assert_abs_diff_eq;

    fn op() -> Opinion {
        Opinion::new(8.0, 2.0, 0.0).unwrap()
    }

    fn graph(edges: &[(&str, &str)]) -> TrustGraph {
        let mut g = TrustGraph::new();
        for (s, d) in edges {
            g.add_edge(s, d, op()).unwrap();
        }
        g
    }

    #[test]
    fn complete_graph_is_uniform() {
        let ids = ["a", "b", "c", "d"];
        let edges: Vec<_> = ids
            .iter()
            .flat_map(|s| ids.iter().filter(move |d| *d != s).map(move |d| (*s, *d)))
            .collect();
        let r = eigen_trust(&graph(&edges), None, RankParams::default()).unwrap();
        for id in ids {
            assert_abs_diff_eq!(r.score(id).unwrap(), 0.25, epsilon = 1e-12);
        }
        assert!(r.converged);
    }

    #[test]
    fn two_node_fixed_point() {
        // t_a = 0.075 + 0.425·t_b and t_a + t_b = 1.
        let r = eigen_trust(&graph(&[("a", "b")]), None, RankParams::default()).unwrap();
        let ta = 0.5 / 1.425;
        assert_abs_diff_eq!(r.score("a").unwrap(), ta, epsilon = 1e-9);
        assert_abs_diff_eq!(r.score("b").unwrap(), 1.0 - ta, epsilon = 1e-9);
        assert!(r.score("b") > r.score("a"));
    }

    #[test]
    fn zero_iterations_return_teleport() {
        let params = RankParams {
            tol: 0.0,
            max_iter: 0,
            ..RankParams::default()
        };
        let g = graph(&[("a", "b"), ("b", "c")]);
        let r = trust_rank(&g, &["b"], params).unwrap();
        assert_eq!(r.to_map().values().copied().collect::<Vec<_>>(), vec![0.0, 1.0, 0.0]);
        assert_eq!(r.iterations, 0);
        assert!(!r.converged);
    }

    #[test]
    fn all_seeds_equal_eigen_trust() {
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")]);
        let params = RankParams::default();
        let et = eigen_trust(&g, None, params).unwrap();
        let tr = trust_rank(&g, &["a", "b", "c"], params).unwrap();
        assert_eq!(et, tr);
    }

    #[test]
    fn star_hub_dominates() {
        let mut edges = Vec::new();
        for leaf in ["l1", "l2", "l3", "l4"] {
            edges.push(("hub", leaf));
            edges.push((leaf, "hub"));
        }
        let r = trust_rank(&graph(&edges), &["hub"], RankParams::default()).unwrap();
        assert_abs_diff_eq!(r.score("hub").unwrap(), 1.0 / 1.85, epsilon = 1e-9);
        for leaf in ["l1", "l2", "l3", "l4"] {
            assert!(r.score("hub").unwrap() > r.score(leaf).unwrap());
        }
        assert_abs_diff_eq!(r.sum(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn errors() {
        let g = graph(&[("a", "b")]);
        assert!(trust_rank(&g, &[], RankParams::default()).is_err());
        assert!(trust_rank(&g, &["zz"], RankParams::default()).is_err());
        assert!(eigen_trust(&TrustGraph::new(), None, RankParams::default()).is_err());
        let bad = RankParams {
            damping: 1.0,
            ..RankParams::default()
        };
        assert!(eigen_trust(&g, None, bad).is_err());
    }

    #[test]
    fn residuals_do_not_grow() {
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"), ("d", "b")]);
        let r = eigen_trust(&g, None, RankParams::default()).unwrap();
        for w in r.residuals[1..].windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
    }
}
