//! Reference implementation of the reduction rules on explicit edge-list
//! copies. Slow and allocation-heavy; meant only for cross-checking
//! [`assess`](super::assess) on small graphs.

use super::AssessQuery;
use crate::error::{Result, TrustError};
use crate::graph::TrustGraph;
use crate::opinion::{combine_many, discount, Opinion};

pub const ORACLE_MAX_NODES: usize = 12;

type EdgeList = Vec<(String, String, Opinion)>;

pub fn oracle_assess(g: &TrustGraph, q: &AssessQuery) -> Result<Opinion> {
    if g.node_count() > ORACLE_MAX_NODES {
        return Err(TrustError::GraphTooLarge {
            nodes: g.node_count(),
            limit: ORACLE_MAX_NODES,
        });
    }
    for id in [q.trustor(), q.trustee()] {
        if !g.contains_node(id) {
            return Err(TrustError::UnknownNode(id.to_string()));
        }
    }
    let edges: EdgeList = g
        .edges()
        .into_iter()
        .map(|(s, d, o)| (s.to_string(), d.to_string(), o))
        .collect();
    Ok(reduce(&edges, q.trustor(), q.trustee(), q.depth()))
}

fn reduce(edges: &EdgeList, trustor: &str, trustee: &str, depth: usize) -> Opinion {
    if depth == 0 {
        return Opinion::vacuous();
    }
    let mut incoming: Vec<&(String, String, Opinion)> =
        edges.iter().filter(|e| e.1 == trustee).collect();
    incoming.sort_by(|x, y| x.0.cmp(&y.0));

    // The subgraph seen by every branch lacks the trustee and its edges.
    let rest: EdgeList = edges
        .iter()
        .filter(|e| e.0 != trustee && e.1 != trustee)
        .cloned()
        .collect();

    let branches: Vec<Opinion> = incoming
        .into_iter()
        .map(|(c, _, w)| {
            if c == trustor {
                *w
            } else {
                discount(&reduce(&rest, trustor, c, depth - 1), w)
            }
        })
        .filter(|b| b.total() > 0.0)
        .collect();

    match branches.as_slice() {
        [] => Opinion::vacuous(),
        [single] => *single,
        many => combine_many(many).unwrap_or_else(|_| Opinion::vacuous()),
    }
}
