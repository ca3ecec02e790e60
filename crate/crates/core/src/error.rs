use thiserror::Error;

pub type Result<T, E = TrustError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum TrustError {
    #[error("undefined distribution: opinion carries no evidence")]
    UndefinedDistribution,

    #[error("invalid opinion: {0}")]
    InvalidOpinion(String),

    #[error("cannot combine an empty collection of opinions")]
    EmptyCollection,

    #[error("subjective-logic discount is degenerate (kappa = {0})")]
    DegenerateDiscount(f64),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("no edge {0} -> {1}")]
    MissingEdge(String, String),

    #[error("trustor and trustee are the same node `{0}`")]
    SelfAssessment(String),

    #[error("`{sink}` is unreachable from `{origin}` within {horizon} hops")]
    Unreachable {
        origin: String,
        sink: String,
        horizon: usize,
    },

    #[error("graph has {nodes} nodes, the oracle accepts at most {limit}")]
    GraphTooLarge { nodes: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient eligible {what}: needed {needed}, found {found}")]
    InsufficientSamples {
        what: &'static str,
        needed: usize,
        found: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
