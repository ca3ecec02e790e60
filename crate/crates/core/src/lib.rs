//! Trust modelling with three-valued subjective logic.
//!
//! Opinions carry positive, negative and uncertain evidence
//! ([`Opinion`]). Trust along a path is discounted ([`discount`]), parallel
//! paths are combined ([`combine`]) and [`assess`] applies both over an
//! arbitrary trust graph. The crate also ships the classic subjective-logic
//! operators, three baselines (TidalTrust, EigenTrust, TrustRank) and the
//! harness used to compare them on level-labelled trust networks.

pub mod assess;
pub mod baselines;
pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod opinion;
pub mod quadrature;
pub mod scale;
pub mod sl;
pub mod synthetic;

pub use assess::{assess, assess_sl, assess_with_trace, oracle_assess, AssessQuery, AssessTrace, Expr};
pub use error::{Result, TrustError};
pub use graph::{graph_stats, GraphStats, TrustGraph};
pub use io::{load_edge_list, read_opinion_list, write_edge_list, write_opinion_list, LoadWarnings, RawEdgeList};
pub use opinion::{
    certainty, collapse, combine, combine_many, discount, expected_belief, expected_probabilities,
    CollapsedOpinion, Opinion,
};
pub use scale::{EvidenceStyle, LevelScale};
pub use sl::{sl_combine, sl_discount, sl_expected_belief, SlOpinion};
