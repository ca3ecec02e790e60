//! AssessTrust: trustor-to-trustee trust over an arbitrary digraph.
//!
//! The search starts at the trustee and walks incoming edges backwards. Each
//! in-neighbour `c` yields one branch: the edge opinion itself when `c` is the
//! trustor, otherwise the edge opinion discounted by the trustor's (recursive)
//! opinion of `c`. Branches are fused with the combining operator. Every
//! recursive call runs on the graph with the current trustee and all of its
//! incident edges removed, which eliminates cycles and bounds the recursion;
//! the depth budget `H` drops by one per hop and an exhausted budget yields the
//! vacuous opinion.
//!
//! The same control flow drives three algebras: three-valued opinions
//! ([`assess`]), classic subjective logic ([`assess_sl`]) and a tracing
//! variant that records the parsing tree ([`assess_with_trace`]).

mod oracle;
mod trace;

pub use oracle::{oracle_assess, ORACLE_MAX_NODES};
pub use trace::{AssessTrace, Expr, Invocation};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrustError};
use crate::graph::TrustGraph;
use crate::opinion::{self, Opinion};
use crate::sl::{self, SlOpinion};

/// Who assesses whom, and how many hops the search may go back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssessQuery {
    trustor: String,
    trustee: String,
    depth: usize,
}

impl AssessQuery {
    pub fn new(trustor: impl Into<String>, trustee: impl Into<String>, depth: usize) -> Result<Self> {
        let (trustor, trustee) = (trustor.into(), trustee.into());
        if trustor == trustee {
            return Err(TrustError::SelfAssessment(trustor));
        }
        if depth == 0 {
            return Err(TrustError::InvalidParameter(
                "maximum search depth must be at least 1".into(),
            ));
        }
        Ok(Self {
            trustor,
            trustee,
            depth,
        })
    }

    pub fn trustor(&self) -> &str {
        &self.trustor
    }

    pub fn trustee(&self) -> &str {
        &self.trustee
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn resolve(&self, g: &TrustGraph) -> Result<(usize, usize)> {
        Ok((g.require(&self.trustor)?, g.require(&self.trustee)?))
    }
}

/// Opinion arithmetic used by the recursion.
pub(crate) trait Algebra {
    type Value;

    fn edge(&mut self, g: &TrustGraph, src: usize, dst: usize, op: &Opinion) -> Self::Value;
    fn vacuous(&mut self) -> Self::Value;
    fn discount(&mut self, distorting: Self::Value, original: Self::Value) -> Result<Self::Value>;
    /// Branches carrying nothing are left out of the fusion.
    fn is_void(&self, v: &Self::Value) -> bool;
    /// Fuses a nonempty, ordered list of branches.
    fn combine(&mut self, branches: Vec<Self::Value>) -> Self::Value;
    fn invoked(&mut self, _g: &TrustGraph, _trustor: usize, _trustee: usize, _depth: usize) {}
    fn returned(&mut self) {}
}

pub(crate) struct ThreeValued;

impl Algebra for ThreeValued {
    type Value = Opinion;

    fn edge(&mut self, _: &TrustGraph, _: usize, _: usize, op: &Opinion) -> Opinion {
        *op
    }

    fn vacuous(&mut self) -> Opinion {
        Opinion::vacuous()
    }

    fn discount(&mut self, distorting: Opinion, original: Opinion) -> Result<Opinion> {
        Ok(opinion::discount(&distorting, &original))
    }

    fn is_void(&self, v: &Opinion) -> bool {
        v.is_vacuous()
    }

    fn combine(&mut self, branches: Vec<Opinion>) -> Opinion {
        opinion::combine_many(&branches).unwrap_or_else(|_| Opinion::vacuous())
    }
}

pub(crate) struct SubjectiveLogic;

impl Algebra for SubjectiveLogic {
    type Value = SlOpinion;

    fn edge(&mut self, _: &TrustGraph, _: usize, _: usize, op: &Opinion) -> SlOpinion {
        SlOpinion::from(op)
    }

    fn vacuous(&mut self) -> SlOpinion {
        SlOpinion::vacuous()
    }

    fn discount(&mut self, distorting: SlOpinion, original: SlOpinion) -> Result<SlOpinion> {
        sl::sl_discount(&distorting, &original)
    }

    fn is_void(&self, v: &SlOpinion) -> bool {
        v.certain() == 0.0
    }

    fn combine(&mut self, branches: Vec<SlOpinion>) -> SlOpinion {
        let mut iter = branches.into_iter();
        let first = iter.next().unwrap_or_else(SlOpinion::vacuous);
        iter.fold(first, |acc, b| sl::sl_combine(&acc, &b))
    }
}

/// Graph minus the current recursion stack of trustees and one optional edge.
pub(crate) struct Search<'g> {
    graph: &'g TrustGraph,
    removed: Vec<bool>,
    skip: Option<(usize, usize)>,
}

impl<'g> Search<'g> {
    pub(crate) fn new(graph: &'g TrustGraph, skip: Option<(usize, usize)>) -> Self {
        Self {
            graph,
            removed: vec![false; graph.node_count()],
            skip,
        }
    }

    pub(crate) fn run<A: Algebra>(
        &mut self,
        alg: &mut A,
        trustor: usize,
        trustee: usize,
        depth: usize,
    ) -> Result<A::Value> {
        alg.invoked(self.graph, trustor, trustee, depth);
        let result = self.expand(alg, trustor, trustee, depth);
        alg.returned();
        result
    }

    fn expand<A: Algebra>(
        &mut self,
        alg: &mut A,
        trustor: usize,
        trustee: usize,
        depth: usize,
    ) -> Result<A::Value> {
        if depth == 0 {
            return Ok(alg.vacuous());
        }
        let g = self.graph;
        self.removed[trustee] = true;
        let mut branches = Vec::new();
        for &c in g.incoming_at(trustee) {
            if self.removed[c] || self.skip == Some((c, trustee)) {
                continue;
            }
            let Some(w) = g.edge_at(c, trustee) else {
                continue;
            };
            let branch = if c == trustor {
                alg.edge(g, c, trustee, w)
            } else {
                // A budget of one hop cannot reach past c; skip the empty call.
                let via = if depth > 1 {
                    self.run(alg, trustor, c, depth - 1)?
                } else {
                    alg.vacuous()
                };
                let original = alg.edge(g, c, trustee, w);
                alg.discount(via, original)?
            };
            if !alg.is_void(&branch) {
                branches.push(branch);
            }
        }
        self.removed[trustee] = false;
        Ok(if branches.is_empty() {
            alg.vacuous()
        } else {
            alg.combine(branches)
        })
    }
}

pub(crate) fn assess_indexed(
    g: &TrustGraph,
    trustor: usize,
    trustee: usize,
    depth: usize,
    skip: Option<(usize, usize)>,
) -> Result<Opinion> {
    Search::new(g, skip).run(&mut ThreeValued, trustor, trustee, depth)
}

pub(crate) fn assess_sl_indexed(
    g: &TrustGraph,
    trustor: usize,
    trustee: usize,
    depth: usize,
    skip: Option<(usize, usize)>,
) -> Result<SlOpinion> {
    Search::new(g, skip).run(&mut SubjectiveLogic, trustor, trustee, depth)
}

/// The trustor's indirect three-valued opinion of the trustee.
pub fn assess(g: &TrustGraph, q: &AssessQuery) -> Result<Opinion> {
    let (a, c) = q.resolve(g)?;
    assess_indexed(g, a, c, q.depth, None)
}

/// SL*: the same search with classic subjective-logic operators.
pub fn assess_sl(g: &TrustGraph, q: &AssessQuery) -> Result<SlOpinion> {
    let (a, c) = q.resolve(g)?;
    assess_sl_indexed(g, a, c, q.depth, None)
}

/// [`assess`] plus the invocation log and the parsing tree it evaluated.
pub fn assess_with_trace(g: &TrustGraph, q: &AssessQuery) -> Result<(Opinion, AssessTrace)> {
    let (a, c) = q.resolve(g)?;
    let mut tracer = trace::Tracer::default();
    let (opinion, expression) = Search::new(g, None).run(&mut tracer, a, c, q.depth)?;
    Ok((opinion, tracer.finish(expression)))
}
