//! TSV edge lists: `src<TAB>dst<TAB>level`, one edge per line.
//!
//! Lines starting with `#` and blank lines are skipped. A level is either one
//! of the configured level names or an integer index into them. Repeated
//! `(src, dst)` pairs keep the last level seen; self-loops are dropped. Both
//! are counted in [`LoadWarnings`].

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Result, TrustError};
use crate::graph::{GraphStats, TrustGraph};
use crate::opinion::{Opinion, DEFAULT_BASE_RATE};
use crate::scale::{resolve_level, EvidenceStyle, LevelScale};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadWarnings {
    pub duplicates: usize,
    pub self_loops: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdge {
    pub src: String,
    pub dst: String,
    pub level: usize,
}

/// Parsed, deduplicated edge list whose levels have not yet become opinions.
#[derive(Debug, Clone)]
pub struct RawEdgeList {
    level_names: Vec<String>,
    edges: Vec<RawEdge>,
    warnings: LoadWarnings,
}

impl RawEdgeList {
    pub fn read<R: BufRead>(reader: R, level_names: &[String]) -> Result<Self> {
        let mut edges: Vec<RawEdge> = Vec::new();
        let mut seen: HashMap<(String, String), usize> = HashMap::new();
        let mut warnings = LoadWarnings::default();

        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(TrustError::Parse {
                    line: lineno,
                    message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                });
            }
            let (src, dst, token) = (fields[0], fields[1], fields[2]);
            if src.is_empty() || dst.is_empty() {
                return Err(TrustError::Parse {
                    line: lineno,
                    message: "empty node id".into(),
                });
            }
            let level = resolve_level(level_names, token).ok_or_else(|| TrustError::Parse {
                line: lineno,
                message: format!("unknown trust level `{token}`"),
            })?;
            if src == dst {
                warnings.self_loops += 1;
                continue;
            }
            match seen.get(&(src.to_string(), dst.to_string())) {
                Some(&pos) => {
                    warnings.duplicates += 1;
                    edges[pos].level = level;
                }
                None => {
                    seen.insert((src.to_string(), dst.to_string()), edges.len());
                    edges.push(RawEdge {
                        src: src.to_string(),
                        dst: dst.to_string(),
                        level,
                    });
                }
            }
        }
        if warnings.duplicates > 0 || warnings.self_loops > 0 {
            log::warn!(
                "edge list: {} duplicate edge(s) replaced, {} self-loop(s) dropped",
                warnings.duplicates,
                warnings.self_loops
            );
        }
        Ok(Self {
            level_names: level_names.to_vec(),
            edges,
            warnings,
        })
    }

    /// Builds a list from already-resolved edges with the same deduplication
    /// rules as [`RawEdgeList::read`].
    pub fn from_edges(level_names: Vec<String>, edges: Vec<RawEdge>) -> Result<Self> {
        let mut out: Vec<RawEdge> = Vec::with_capacity(edges.len());
        let mut seen: HashMap<(String, String), usize> = HashMap::new();
        let mut warnings = LoadWarnings::default();
        for e in edges {
            if e.level >= level_names.len() {
                return Err(TrustError::InvalidParameter(format!(
                    "level {} out of range for {} levels",
                    e.level,
                    level_names.len()
                )));
            }
            if e.src == e.dst {
                warnings.self_loops += 1;
                continue;
            }
            match seen.get(&(e.src.clone(), e.dst.clone())) {
                Some(&pos) => {
                    warnings.duplicates += 1;
                    out[pos].level = e.level;
                }
                None => {
                    seen.insert((e.src.clone(), e.dst.clone()), out.len());
                    out.push(e);
                }
            }
        }
        Ok(Self {
            level_names,
            edges: out,
            warnings,
        })
    }

    /// Relabels edges of over-represented levels so that no level is empty,
    /// as long as there are enough edges.
    pub(crate) fn ensure_all_levels(&mut self) {
        let mut counts = self.level_counts();
        for missing in 0..counts.len() {
            if counts[missing] > 0 {
                continue;
            }
            if let Some(e) = self.edges.iter_mut().find(|e| counts[e.level] > 1) {
                counts[e.level] -= 1;
                e.level = missing;
                counts[missing] = 1;
            }
        }
    }

    pub fn level_names(&self) -> &[String] {
        &self.level_names
    }

    pub fn edges(&self) -> &[RawEdge] {
        &self.edges
    }

    pub fn warnings(&self) -> LoadWarnings {
        self.warnings
    }

    pub fn level_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.level_names.len()];
        for e in &self.edges {
            counts[e.level] += 1;
        }
        counts
    }

    /// Normal-score scale over this list's level frequencies.
    pub fn scale(&self, lowest: f64, highest: f64) -> Result<LevelScale> {
        LevelScale::from_counts(self.level_names.clone(), &self.level_counts(), lowest, highest)
    }

    pub fn stats(&self) -> GraphStats {
        let mut nodes: Vec<&str> = self
            .edges
            .iter()
            .flat_map(|e| [e.src.as_str(), e.dst.as_str()])
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        GraphStats::from_counts(nodes.len(), self.edges.len())
    }

    pub fn to_graph(&self, scale: &LevelScale, style: EvidenceStyle, lambda: f64) -> Result<TrustGraph> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(TrustError::InvalidParameter(format!(
                "total evidence lambda must be positive, got {lambda}"
            )));
        }
        if scale.len() != self.level_names.len() {
            return Err(TrustError::InvalidParameter(format!(
                "scale has {} levels but the edge list uses {}",
                scale.len(),
                self.level_names.len()
            )));
        }
        let opinions = scale
            .fractions()
            .iter()
            .map(|&r| style.opinion(r, lambda))
            .collect::<Result<Vec<_>>>()?;
        let mut g = TrustGraph::new();
        for e in &self.edges {
            g.add_edge(&e.src, &e.dst, opinions[e.level])?;
        }
        Ok(g)
    }
}

/// Reads a level edge list straight into a graph using `scale`'s level names.
pub fn load_edge_list<R: BufRead>(
    source: R,
    scale: &LevelScale,
    style: EvidenceStyle,
    lambda: f64,
) -> Result<(TrustGraph, LoadWarnings)> {
    let raw = RawEdgeList::read(source, scale.names())?;
    let g = raw.to_graph(scale, style, lambda)?;
    Ok((g, raw.warnings()))
}

/// Reads an explicit-opinion edge list:
/// `src<TAB>dst<TAB>alpha<TAB>beta<TAB>gamma[<TAB>base_rate]`.
pub fn read_opinion_list<R: BufRead>(reader: R) -> Result<(TrustGraph, LoadWarnings)> {
    let mut g = TrustGraph::new();
    let mut warnings = LoadWarnings::default();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| TrustError::Parse { line: lineno, message };
        let fields: Vec<&str> = line.split('\t').collect();
        if !(5..=6).contains(&fields.len()) {
            return Err(parse_err(format!(
                "expected 5 or 6 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let mut nums = [0.0, 0.0, 0.0, DEFAULT_BASE_RATE];
        for (slot, token) in nums.iter_mut().zip(&fields[2..]) {
            *slot = token
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("`{token}` is not a number")))?;
        }
        let op = Opinion::with_base_rate(nums[0], nums[1], nums[2], nums[3])
            .map_err(|e| parse_err(e.to_string()))?;
        let (src, dst) = (fields[0], fields[1]);
        if src.is_empty() || dst.is_empty() {
            return Err(parse_err("empty node id".into()));
        }
        if src == dst {
            warnings.self_loops += 1;
            continue;
        }
        if g.add_edge(src, dst, op)?.is_some() {
            warnings.duplicates += 1;
        }
    }
    Ok((g, warnings))
}

/// Writes `g` back as a level edge list, mapping each opinion's positive
/// fraction to the nearest level.
pub fn write_edge_list<W: Write>(g: &TrustGraph, scale: &LevelScale, mut out: W) -> Result<()> {
    writeln!(out, "# src\tdst\tlevel")?;
    for (src, dst, op) in g.edges() {
        let level = scale.nearest_level(op.positive_fraction());
        writeln!(out, "{src}\t{dst}\t{}", scale.name(level))?;
    }
    Ok(())
}

/// Writes `g` with explicit evidence columns.
pub fn write_opinion_list<W: Write>(g: &TrustGraph, mut out: W) -> Result<()> {
    writeln!(out, "# src\tdst\talpha\tbeta\tgamma\tbase_rate")?;
    for (src, dst, op) in g.edges() {
        writeln!(
            out,
            "{src}\t{dst}\t{}\t{}\t{}\t{}",
            op.alpha(),
            op.beta(),
            op.gamma(),
            op.base_rate()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn advogato_scale() -> LevelScale {
        LevelScale::new(
            EvidenceStyle::PositiveNegative.default_level_names(),
            vec![0.3, 0.5, 0.7, 0.9],
        )
        .unwrap()
    }

    #[test]
    fn master_edge_opinion() {
        let (g, w) = load_edge_list(
            "a\tb\tmaster\n".as_bytes(),
            &advogato_scale(),
            EvidenceStyle::PositiveNegative,
            30.0,
        )
        .unwrap();
        let op = g.edge("a", "b").unwrap();
        assert_abs_diff_eq!(op.alpha(), 27.0, epsilon = 1e-12);
        assert_abs_diff_eq!(op.beta(), 3.0, epsilon = 1e-12);
        assert_eq!(op.gamma(), 0.0);
        assert_eq!(op.total(), 30.0);
        assert_eq!(w, LoadWarnings::default());
    }

    #[test]
    fn integer_level_with_uncertain_style() {
        let (g, _) = load_edge_list(
            "a\tb\t0\n".as_bytes(),
            &advogato_scale(),
            EvidenceStyle::PositiveUncertain,
            30.0,
        )
        .unwrap();
        let op = g.edge("a", "b").unwrap();
        assert_abs_diff_eq!(op.alpha(), 9.0, epsilon = 1e-12);
        assert_eq!(op.beta(), 0.0);
        assert_abs_diff_eq!(op.gamma(), 21.0, epsilon = 1e-12);
    }

    #[test]
    fn self_loops_and_duplicates_are_counted() {
        let text = "# header\na\ta\tmaster\na\tb\tobserver\r\n\na\tb\tjourneyer\n";
        let (g, w) = load_edge_list(
            text.as_bytes(),
            &advogato_scale(),
            EvidenceStyle::PositiveNegative,
            10.0,
        )
        .unwrap();
        assert_eq!(w.self_loops, 1);
        assert_eq!(w.duplicates, 1);
        assert_eq!(g.edge_count(), 1);
        assert_abs_diff_eq!(g.edge("a", "b").unwrap().alpha(), 7.0, epsilon = 1e-12);
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let scale = advogato_scale();
        let style = EvidenceStyle::PositiveNegative;
        let err = load_edge_list("a\tb\tmaster\na b master\n".as_bytes(), &scale, style, 10.0).unwrap_err();
        assert!(matches!(err, TrustError::Parse { line: 2, .. }), "{err}");
        let err = load_edge_list("a\tb\tguru\n".as_bytes(), &scale, style, 10.0).unwrap_err();
        assert!(matches!(err, TrustError::Parse { line: 1, .. }), "{err}");
        assert!(load_edge_list("a\tb\t1\n".as_bytes(), &scale, style, 0.0).is_err());
    }

    #[test]
    fn empty_input_is_an_empty_graph() {
        let (g, _) = load_edge_list(
            "".as_bytes(),
            &advogato_scale(),
            EvidenceStyle::PositiveNegative,
            10.0,
        )
        .unwrap();
        assert_eq!(g.node_count(), 0);
    }

    #[test]
    fn raw_list_counts_levels() {
        let names = EvidenceStyle::PositiveUncertain.default_level_names();
        let raw = RawEdgeList::read("a\tb\t3\nb\tc\t3\nc\ta\t1\n".as_bytes(), &names).unwrap();
        assert_eq!(raw.level_counts(), vec![0, 1, 0, 2]);
        assert!(raw.scale(0.1, 0.9).is_err());
        assert_eq!(raw.stats().nodes, 3);
    }

    #[test]
    fn opinion_list_round_trips() {
        let text = "# src\tdst\talpha\tbeta\tgamma\na\tb\t5\t3\t2\nb\tc\t4\t4\t2\t0.25\n";
        let (g, w) = read_opinion_list(text.as_bytes()).unwrap();
        assert_eq!(w, LoadWarnings::default());
        assert_eq!(g.edge("b", "c").unwrap().base_rate(), 0.25);
        let mut buf = Vec::new();
        write_opinion_list(&g, &mut buf).unwrap();
        let (h, _) = read_opinion_list(buf.as_slice()).unwrap();
        assert_eq!(g.edges(), h.edges());
        let err = read_opinion_list("a\tb\t1\t-1\t0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TrustError::Parse { line: 1, .. }));
        assert!(read_opinion_list("a\tb\t1\n".as_bytes()).is_err());
    }

    #[test]
    fn write_then_read_round_trips() {
        let scale = advogato_scale();
        let style = EvidenceStyle::PositiveNegative;
        let text = "x\ty\tapprentice\ny\tz\tmaster\nz\tx\tobserver\nx\tz\tjourneyer\n";
        let (g, _) = load_edge_list(text.as_bytes(), &scale, style, 20.0).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &scale, &mut buf).unwrap();
        let (h, _) = load_edge_list(buf.as_slice(), &scale, style, 20.0).unwrap();
        assert_eq!(g, h);
    }
}
