use thiserror::Error;

/// Errors raised while loading clusterings or evaluating metrics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A data line contained something other than a non-negative integer.
    #[error("line {line}: invalid node id {token:?}")]
    InvalidToken { line: usize, token: String },

    /// A node id was listed twice on the same line.
    #[error("line {line}: duplicate node id {node}")]
    DuplicateMember { line: usize, node: u64 },

    /// The input had no data lines.
    #[error("empty clustering")]
    EmptyClustering,

    /// A cluster without members was passed to a constructor.
    #[error("cluster {cluster} is empty")]
    EmptyCluster { cluster: usize },

    /// The two clusterings do not cover the same node universe.
    #[error(
        "universe mismatch: {only_gt} node(s) only in the ground truth, \
         {only_cand} node(s) only in the candidate"
    )]
    UniverseMismatch { only_gt: usize, only_cand: usize },

    /// Too few nodes (or no clusters left) to evaluate the metric.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Chance agreement is 1 while the observed agreement is below 1.
    #[error("undefined (expected agreement saturates)")]
    SaturatedExpectation,

    /// Invalid parameters for a metric or generator.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
