//! TidalTrust: trust as a weighted average of ratings along the strongest
//! shortest paths.
//!
//! A breadth-first search from the source fixes the sink's distance and keeps
//! only edges that advance one level towards it. The threshold `max` is the
//! best path strength (weakest edge on a path) over those shortest paths.
//! Working back from the sink, a node that rates the sink directly uses that
//! rating; any other node averages its successors' values, weighted by its
//! ratings of them, counting only successors it rates at least `max`.

use std::collections::VecDeque;

use super::edge_value;
use crate::error::{Result, TrustError};
use crate::graph::TrustGraph;
use crate::opinion::Opinion;

/// TidalTrust with the default edge value α / (α + β + γ).
pub fn tidal_trust(g: &TrustGraph, source: &str, sink: &str, horizon: usize) -> Result<f64> {
    tidal_trust_with(g, source, sink, horizon, edge_value)
}

/// TidalTrust with a caller-supplied mapping from edge opinions to ratings in
/// [0, 1]; out-of-range ratings are clamped.
pub fn tidal_trust_with<F>(g: &TrustGraph, source: &str, sink: &str, horizon: usize, value: F) -> Result<f64>
where
    F: Fn(&Opinion) -> f64,
{
    if source == sink {
        return Err(TrustError::SelfAssessment(source.to_string()));
    }
    let s = g.require(source)?;
    let t = g.require(sink)?;
    tidal_indexed(g, s, t, horizon, None, value)
}

pub(crate) fn tidal_indexed<F>(
    g: &TrustGraph,
    source: usize,
    sink: usize,
    horizon: usize,
    skip: Option<(usize, usize)>,
    value: F,
) -> Result<f64>
where
    F: Fn(&Opinion) -> f64,
{
    let unreachable = || TrustError::Unreachable {
        origin: g.node_id(source).to_string(),
        sink: g.node_id(sink).to_string(),
        horizon,
    };
    let rating = |u: usize, v: usize| -> f64 {
        g.edge_at(u, v).map_or(0.0, |op| {
            let r = value(op);
            if r.is_nan() {
                0.0
            } else {
                r.clamp(0.0, 1.0)
            }
        })
    };
    let usable = |u: usize, v: usize| skip != Some((u, v));

    // Levels of the shortest-path search, stopping at the sink's level.
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut levels: Vec<Vec<usize>> = vec![vec![source]];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    let mut sink_depth = None;
    while let Some(u) = queue.pop_front() {
        let d = dist[u];
        if sink_depth.is_some_and(|sd| d + 1 > sd) || d >= horizon {
            continue;
        }
        for &v in g.outgoing_at(u) {
            if !usable(u, v) || dist[v] != usize::MAX {
                continue;
            }
            dist[v] = d + 1;
            if v == sink {
                sink_depth = Some(d + 1);
                continue;
            }
            if levels.len() <= d + 1 {
                levels.push(Vec::new());
            }
            levels[d + 1].push(v);
            queue.push_back(v);
        }
    }
    let sink_depth = sink_depth.ok_or_else(unreachable)?;
    levels.truncate(sink_depth);

    let dist = &dist;
    let forward = |u: usize| {
        g.outgoing_at(u)
            .iter()
            .copied()
            .filter(move |&v| usable(u, v) && dist[v] == dist[u] + 1)
    };

    // Nodes from which the sink is reachable along level-advancing edges.
    let mut reaches = vec![false; n];
    reaches[sink] = true;
    for level in levels.iter().rev() {
        for &u in level {
            reaches[u] = forward(u).any(|v| reaches[v]);
        }
    }

    // Strongest weakest-link over shortest paths.
    let mut flow = vec![f64::NEG_INFINITY; n];
    flow[source] = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for level in &levels {
        for &u in level {
            if !reaches[u] || flow[u] == f64::NEG_INFINITY {
                continue;
            }
            for v in forward(u).filter(|&v| reaches[v]) {
                let f = flow[u].min(rating(u, v));
                if v == sink {
                    max = max.max(f);
                } else if f > flow[v] {
                    flow[v] = f;
                }
            }
        }
    }

    let mut trust: Vec<Option<f64>> = vec![None; n];
    for level in levels.iter().rev() {
        for &u in level {
            if !reaches[u] {
                continue;
            }
            if dist[u] + 1 == sink_depth {
                trust[u] = Some(rating(u, sink));
                continue;
            }
            let mut num = 0.0;
            let mut den = 0.0;
            let mut plain = 0.0;
            let mut count = 0usize;
            for v in forward(u) {
                let Some(tv) = trust[v] else { continue };
                let w = rating(u, v);
                if w >= max {
                    num += w * tv;
                    den += w;
                    plain += tv;
                    count += 1;
                }
            }
            trust[u] = match (count, den > 0.0) {
                (0, _) => None,
                (_, true) => Some(num / den),
                (_, false) => Some(plain / count as f64),
            };
        }
    }
    trust[source].map(|v| v.clamp(0.0, 1.0)).ok_or_else(unreachable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rated(r: f64) -> Opinion {
        Opinion::new(10.0 * r, 10.0 * (1.0 - r), 0.0).unwrap()
    }

    fn graph(edges: &[(&str, &str, f64)]) -> TrustGraph {
        let mut g = TrustGraph::new();
        for (s, d, r) in edges {
            g.add_edge(s, d, rated(*r)).unwrap();
        }
        g
    }

    #[test]
    fn direct_edge() {
        let g = graph(&[("s", "t", 0.7)]);
        assert_abs_diff_eq!(tidal_trust(&g, "s", "t", 3).unwrap(), 0.7, epsilon = 1e-12);
    }

    #[test]
    fn series_takes_last_hop() {
        let g = graph(&[("s", "b", 0.8), ("b", "t", 0.5)]);
        assert_abs_diff_eq!(tidal_trust(&g, "s", "t", 3).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn threshold_prunes_weak_path() {
        let g = graph(&[("s", "x", 0.9), ("x", "t", 0.9), ("s", "y", 0.3), ("y", "t", 0.3)]);
        assert_abs_diff_eq!(tidal_trust(&g, "s", "t", 3).unwrap(), 0.9, epsilon = 1e-12);
    }

    #[test]
    fn equal_strength_paths_are_weighted() {
        // max = 0.6 via both branches; weights 0.6 and 0.8 on the ratings 0.9 and 0.6.
        let g = graph(&[("s", "x", 0.6), ("x", "t", 0.9), ("s", "y", 0.8), ("y", "t", 0.6)]);
        let want = (0.6 * 0.9 + 0.8 * 0.6) / (0.6 + 0.8);
        assert_abs_diff_eq!(tidal_trust(&g, "s", "t", 3).unwrap(), want, epsilon = 1e-12);
    }

    #[test]
    fn only_shortest_paths_count() {
        let g = graph(&[("s", "t", 0.2), ("s", "x", 1.0), ("x", "t", 1.0)]);
        assert_abs_diff_eq!(tidal_trust(&g, "s", "t", 3).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn horizon_and_reachability() {
        let g = graph(&[("s", "a", 0.8), ("a", "b", 0.8), ("b", "t", 0.8), ("t", "s", 0.1)]);
        assert!(tidal_trust(&g, "s", "t", 3).is_ok());
        assert!(matches!(tidal_trust(&g, "s", "t", 2), Err(TrustError::Unreachable { .. })));
        assert!(matches!(tidal_trust(&g, "s", "s", 2), Err(TrustError::SelfAssessment(_))));
        assert!(matches!(tidal_trust(&g, "s", "zz", 2), Err(TrustError::UnknownNode(_))));
    }

    #[test]
    fn skipped_edge_forces_the_long_way() {
        let g = graph(&[("s", "t", 0.2), ("s", "x", 0.7), ("x", "t", 0.9)]);
        let (s, t) = (g.node_index("s").unwrap(), g.node_index("t").unwrap());
        let v = tidal_indexed(&g, s, t, 3, Some((s, t)), edge_value).unwrap();
        assert_abs_diff_eq!(v, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn custom_value_function() {
        let g = graph(&[("s", "t", 0.7)]);
        let v = tidal_trust_with(&g, "s", "t", 1, |op| op.beta() / op.total()).unwrap();
        assert_abs_diff_eq!(v, 0.3, epsilon = 1e-12);
    }
}
