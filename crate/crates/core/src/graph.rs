//! Directed trust graph with one opinion per edge.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Result, TrustError};
use crate::opinion::Opinion;

/// A simple digraph over string-named users.
///
/// Node ids are interned to dense indices. Adjacency lists are kept sorted by
/// neighbour id so every traversal visits neighbours in lexicographic order.
#[derive(Debug, Clone, Default)]
pub struct TrustGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: HashMap<(usize, usize), Opinion>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    /// |E| / |V|: mean in-degree, equal to the mean out-degree.
    pub mean_out_degree: f64,
    /// 2·|E| / |V|: mean of in-degree plus out-degree.
    pub mean_total_degree: f64,
}

impl GraphStats {
    pub fn from_counts(nodes: usize, edges: usize) -> Self {
        let (out, total) = if nodes == 0 {
            (0.0, 0.0)
        } else {
            let n = nodes as f64;
            (edges as f64 / n, 2.0 * edges as f64 / n)
        };
        Self {
            nodes,
            edges,
            mean_out_degree: out,
            mean_total_degree: total,
        }
    }
}

impl TrustGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub(crate) fn require(&self, id: &str) -> Result<usize> {
        self.node_index(id)
            .ok_or_else(|| TrustError::UnknownNode(id.to_string()))
    }

    pub fn node_id(&self, idx: usize) -> &str {
        &self.ids[idx]
    }

    /// Node ids in insertion order.
    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }

    /// Node ids in lexicographic order.
    pub fn sorted_nodes(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.nodes().collect();
        v.sort_unstable();
        v
    }

    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        self.incoming.push(Vec::new());
        self.outgoing.push(Vec::new());
        i
    }

    fn insert_sorted(ids: &[String], list: &mut Vec<usize>, node: usize) {
        if let Err(pos) = list.binary_search_by(|&n| ids[n].cmp(&ids[node])) {
            list.insert(pos, node);
        }
    }

    fn remove_sorted(ids: &[String], list: &mut Vec<usize>, node: usize) {
        if let Ok(pos) = list.binary_search_by(|&n| ids[n].cmp(&ids[node])) {
            list.remove(pos);
        }
    }

    /// Inserts or replaces the edge `src -> dst`, returning the previous opinion.
    pub fn add_edge(&mut self, src: &str, dst: &str, opinion: Opinion) -> Result<Option<Opinion>> {
        if src == dst {
            return Err(TrustError::InvalidParameter(format!(
                "self-loop on `{src}` is not allowed"
            )));
        }
        let s = self.add_node(src);
        let d = self.add_node(dst);
        let previous = self.edges.insert((s, d), opinion);
        if previous.is_none() {
            Self::insert_sorted(&self.ids, &mut self.outgoing[s], d);
            Self::insert_sorted(&self.ids, &mut self.incoming[d], s);
        }
        Ok(previous)
    }

    /// Removes `src -> dst` in place. Both nodes stay in the graph.
    pub fn take_edge(&mut self, src: &str, dst: &str) -> Result<Opinion> {
        let missing = || TrustError::MissingEdge(src.to_string(), dst.to_string());
        let s = self.node_index(src).ok_or_else(missing)?;
        let d = self.node_index(dst).ok_or_else(missing)?;
        let op = self.edges.remove(&(s, d)).ok_or_else(missing)?;
        Self::remove_sorted(&self.ids, &mut self.outgoing[s], d);
        Self::remove_sorted(&self.ids, &mut self.incoming[d], s);
        Ok(op)
    }

    /// A copy of this graph without `src -> dst`.
    pub fn remove_edge(&self, src: &str, dst: &str) -> Result<TrustGraph> {
        let mut g = self.clone();
        g.take_edge(src, dst)?;
        Ok(g)
    }

    pub fn edge(&self, src: &str, dst: &str) -> Option<&Opinion> {
        let s = self.node_index(src)?;
        let d = self.node_index(dst)?;
        self.edges.get(&(s, d))
    }

    pub(crate) fn edge_at(&self, src: usize, dst: usize) -> Option<&Opinion> {
        self.edges.get(&(src, dst))
    }

    /// In-neighbours of `node`, sorted by id.
    pub(crate) fn incoming_at(&self, node: usize) -> &[usize] {
        &self.incoming[node]
    }

    /// Out-neighbours of `node`, sorted by id.
    pub(crate) fn outgoing_at(&self, node: usize) -> &[usize] {
        &self.outgoing[node]
    }

    pub fn in_neighbors(&self, id: &str) -> Result<Vec<&str>> {
        let i = self.require(id)?;
        Ok(self.incoming[i].iter().map(|&n| self.node_id(n)).collect())
    }

    pub fn out_neighbors(&self, id: &str) -> Result<Vec<&str>> {
        let i = self.require(id)?;
        Ok(self.outgoing[i].iter().map(|&n| self.node_id(n)).collect())
    }

    /// All edges sorted by (source id, target id).
    pub fn edges(&self) -> Vec<(&str, &str, Opinion)> {
        let mut out: Vec<(&str, &str, Opinion)> = self
            .edges
            .iter()
            .map(|(&(s, d), op)| (self.node_id(s), self.node_id(d), *op))
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// True iff a directed path of at most `max_hops` edges leads from `src` to `dst`.
    pub fn path_exists(&self, src: &str, dst: &str, max_hops: usize) -> Result<bool> {
        if src == dst {
            return Err(TrustError::SelfAssessment(src.to_string()));
        }
        let s = self.require(src)?;
        let d = self.require(dst)?;
        Ok(self.reachable_within(s, d, max_hops, None))
    }

    /// Bounded BFS that optionally ignores one edge.
    pub(crate) fn reachable_within(
        &self,
        src: usize,
        dst: usize,
        max_hops: usize,
        skip: Option<(usize, usize)>,
    ) -> bool {
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if dist[u] == max_hops {
                continue;
            }
            for &v in &self.outgoing[u] {
                if skip == Some((u, v)) || dist[v] != usize::MAX {
                    continue;
                }
                if v == dst {
                    return true;
                }
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
        false
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats::from_counts(self.node_count(), self.edge_count())
    }
}

pub fn graph_stats(g: &TrustGraph) -> GraphStats {
    g.stats()
}

impl PartialEq for TrustGraph {
    /// Same node ids and same edges carrying equal opinions.
    fn eq(&self, other: &Self) -> bool {
        self.node_count() == other.node_count()
            && self.edge_count() == other.edge_count()
            && self.ids.iter().all(|id| other.contains_node(id))
            && self.edges.iter().all(|(&(s, d), op)| {
                other.edge(self.node_id(s), self.node_id(d)) == Some(op)
            })
    }
}
