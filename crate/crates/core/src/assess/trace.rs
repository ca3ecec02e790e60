use std::fmt;

use serde::Serialize;

use super::Algebra;
use crate::error::Result;
use crate::graph::TrustGraph;
use crate::opinion::{self, Opinion};

/// Parsing tree built by one assessment.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Edge {
        from: String,
        to: String,
        opinion: Opinion,
    },
    Vacuous,
    Discount(Box<Expr>, Box<Expr>),
    Combine(Vec<Expr>),
}

impl Expr {
    /// Recomputes the opinion this tree stands for.
    pub fn evaluate(&self) -> Opinion {
        match self {
            Expr::Edge { opinion, .. } => *opinion,
            Expr::Vacuous => Opinion::vacuous(),
            Expr::Discount(d, o) => opinion::discount(&d.evaluate(), &o.evaluate()),
            Expr::Combine(parts) => {
                let ops: Vec<Opinion> = parts.iter().map(Expr::evaluate).collect();
                opinion::combine_many(&ops).unwrap_or_else(|_| Opinion::vacuous())
            }
        }
    }

    /// Edges that enter the top-level fusion as originals, in branch order.
    pub fn original_edges(&self) -> Vec<(&str, &str)> {
        let branches: &[Expr] = match self {
            Expr::Combine(parts) => parts,
            other => std::slice::from_ref(other),
        };
        branches
            .iter()
            .filter_map(|b| match b {
                Expr::Edge { from, to, .. } => Some((from.as_str(), to.as_str())),
                Expr::Discount(_, o) => match o.as_ref() {
                    Expr::Edge { from, to, .. } => Some((from.as_str(), to.as_str())),
                    _ => None,
                },
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Edge { from, to, .. } => write!(f, "ω[{from}→{to}]"),
            Expr::Vacuous => write!(f, "⟨0,0,0⟩"),
            Expr::Discount(d, o) => write!(f, "Δ({d}, {o})"),
            Expr::Combine(parts) => {
                write!(f, "Θ(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One call of the recursion, in call order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Invocation {
    pub trustor: String,
    pub trustee: String,
    pub depth: usize,
    /// Index of the calling invocation; `None` for the root.
    pub parent: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssessTrace {
    pub invocations: Vec<Invocation>,
    pub expression: Expr,
}

impl AssessTrace {
    /// Longest chain of nested invocations, counting the root.
    pub fn nesting_depth(&self) -> usize {
        let mut level = vec![0usize; self.invocations.len()];
        for (i, inv) in self.invocations.iter().enumerate() {
            level[i] = inv.parent.map_or(1, |p| level[p] + 1);
        }
        level.into_iter().max().unwrap_or(0)
    }

    /// Invocations as `(trustor, trustee, depth)` triples.
    pub fn calls(&self) -> Vec<(&str, &str, usize)> {
        self.invocations
            .iter()
            .map(|i| (i.trustor.as_str(), i.trustee.as_str(), i.depth))
            .collect()
    }
}

#[derive(Default)]
pub(crate) struct Tracer {
    invocations: Vec<Invocation>,
    stack: Vec<usize>,
}

impl Tracer {
    pub(crate) fn finish(self, expression: Expr) -> AssessTrace {
        AssessTrace {
            invocations: self.invocations,
            expression,
        }
    }
}

impl Algebra for Tracer {
    type Value = (Opinion, Expr);

    fn edge(&mut self, g: &TrustGraph, src: usize, dst: usize, op: &Opinion) -> Self::Value {
        let expr = Expr::Edge {
            from: g.node_id(src).to_string(),
            to: g.node_id(dst).to_string(),
            opinion: *op,
        };
        (*op, expr)
    }

    fn vacuous(&mut self) -> Self::Value {
        (Opinion::vacuous(), Expr::Vacuous)
    }

    fn discount(&mut self, d: Self::Value, o: Self::Value) -> Result<Self::Value> {
        Ok((
            opinion::discount(&d.0, &o.0),
            Expr::Discount(Box::new(d.1), Box::new(o.1)),
        ))
    }

    fn is_void(&self, v: &Self::Value) -> bool {
        v.0.is_vacuous()
    }

    fn combine(&mut self, branches: Vec<Self::Value>) -> Self::Value {
        if branches.len() == 1 {
            return branches.into_iter().next().unwrap_or((Opinion::vacuous(), Expr::Vacuous));
        }
        let (ops, exprs): (Vec<Opinion>, Vec<Expr>) = branches.into_iter().unzip();
        let op = opinion::combine_many(&ops).unwrap_or_else(|_| Opinion::vacuous());
        (op, Expr::Combine(exprs))
    }

    fn invoked(&mut self, g: &TrustGraph, trustor: usize, trustee: usize, depth: usize) {
        self.invocations.push(Invocation {
            trustor: g.node_id(trustor).to_string(),
            trustee: g.node_id(trustee).to_string(),
            depth,
            parent: self.stack.last().copied(),
        });
        self.stack.push(self.invocations.len() - 1);
    }

    fn returned(&mut self) {
        self.stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::super::{assess, assess_with_trace, AssessQuery};
    use crate::graph::TrustGraph;
    use crate::opinion::{combine, discount, Opinion};
    use approx::assert_abs_diff_eq;

    fn op(a: f64, b: f64, g: f64) -> Opinion {
        Opinion::new(a, b, g).unwrap()
    }

    fn bridge() -> (TrustGraph, [Opinion; 5]) {
        let ops = [
            op(5.0, 3.0, 2.0),
            op(7.0, 1.0, 2.0),
            op(4.0, 4.0, 2.0),
            op(6.0, 2.0, 0.0),
            op(3.0, 0.0, 5.0),
        ];
        let mut g = TrustGraph::new();
        for ((s, d), o) in [("A", "B"), ("A", "C"), ("B", "C"), ("B", "D"), ("C", "D")]
            .iter()
            .zip(ops)
        {
            g.add_edge(s, d, o).unwrap();
        }
        (g, ops)
    }

    #[test]
    fn bridge_invocations() {
        let (g, _) = bridge();
        let (_, trace) = assess_with_trace(&g, &AssessQuery::new("A", "D", 3).unwrap()).unwrap();
        assert_eq!(
            trace.calls(),
            vec![("A", "D", 3), ("A", "B", 2), ("A", "C", 2), ("A", "B", 1)]
        );
        assert_eq!(trace.nesting_depth(), 3);
        assert_eq!(trace.expression.original_edges(), vec![("B", "D"), ("C", "D")]);
    }

    #[test]
    fn bridge_matches_hand_formula() {
        let (g, [ab, ac, bc, bd, cd]) = bridge();
        let want = combine(&discount(&ab, &bd), &discount(&combine(&discount(&ab, &bc), &ac), &cd));
        let (got, trace) = assess_with_trace(&g, &AssessQuery::new("A", "D", 3).unwrap()).unwrap();
        for (x, y) in got.components().iter().zip(want.components()) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-12);
        }
        assert_eq!(trace.expression.evaluate(), got);
        assert_eq!(assess(&g, &AssessQuery::new("A", "D", 3).unwrap()).unwrap(), got);
        assert_eq!(
            trace.expression.to_string(),
            "Θ(Δ(ω[A→B], ω[B→D]), Δ(Θ(ω[A→C], Δ(ω[A→B], ω[B→C])), ω[C→D]))"
        );
    }

    #[test]
    fn nesting_never_exceeds_depth() {
        let mut g = TrustGraph::new();
        let ids = ["a", "b", "c", "d", "e"];
        for s in ids {
            for d in ids {
                if s != d {
                    g.add_edge(s, d, op(2.0, 1.0, 1.0)).unwrap();
                }
            }
        }
        for h in 1..=4 {
            let (_, trace) = assess_with_trace(&g, &AssessQuery::new("a", "e", h).unwrap()).unwrap();
            assert!(trace.nesting_depth() <= h);
            assert!(trace.invocations.iter().all(|i| i.depth >= 1));
        }
    }
}
