use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph6 parse error at byte {pos}: {msg}")]
    Graph6 { pos: usize, msg: String },

    #[error("edge list parse error on line {line}: {msg}")]
    EdgeList { line: usize, msg: String },

    #[error("pair rejected: {0}")]
    PairRejected(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A proved invariant failed; this means a bug, not a mathematical finding.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("i/o: {0}")]
    Io(String),

    /// Some member of the small-graph family has no valid colouring.
    #[error("no valid colouring for family member {0}")]
    UncolourableMember(String),
}

pub type Result<T> = std::result::Result<T, Error>;
