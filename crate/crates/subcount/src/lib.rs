//! Estimate the number of copies of a small pattern graph inside a large
//! graph to within `(1 ± eps)`, using only degree, neighbor, pair, and
//! uniform edge-sample queries.
//!
//! The pipeline: a pattern is decomposed via its minimum fractional edge
//! cover into vertex-disjoint odd cycles and stars ([`pattern`]), potential
//! copies are sampled component by component with inverse-probability
//! weights ([`samplers`]), and draws are averaged, amplified, and searched
//! over a copy-count guess to produce a high-probability estimate
//! ([`estimator`]). Exact brute-force counting ([`oracle`]) and hard/planted
//! instance generators ([`instances`]) support testing and benchmarks.

pub mod estimator;
pub mod graph;
pub mod instances;
pub mod oracle;
pub mod pattern;
pub mod samplers;

pub use graph::{Graph, QueryCounts, QuerySession, VertexId, VertexOrder};
pub use pattern::{Decomposition, EdgeCoverSolution, Pattern, Rational};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(VertexId, usize),
    #[error("neighbor index {index} out of range for vertex {vertex} (degree {degree})")]
    NeighborIndexOutOfRange {
        vertex: VertexId,
        index: usize,
        degree: usize,
    },
    #[error("pair query endpoints must differ (got {0} twice)")]
    PairQuerySameVertex(VertexId),
    #[error("edge-sample query on an empty graph")]
    EmptyGraph,
    #[error("pattern has an isolated vertex ({0})")]
    IsolatedVertex(VertexId),
    #[error("pattern too large: {0} vertices (cap is {cap})", cap = pattern::MAX_PATTERN_VERTICES)]
    PatternTooLarge(usize),
    #[error("pattern is not a single star")]
    NotAStar,
    #[error("graph and pattern color modes differ")]
    ColorModeMismatch,
    #[error("every amplification round exceeded its query budget")]
    BudgetExhausted,
    #[error("enumeration budget exceeded ({0} steps)")]
    EnumerationBudget(u64),
    #[error("infeasible generator request: {0}")]
    InfeasibleInstance(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
