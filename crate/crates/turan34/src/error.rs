use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex count {0} out of range 1..={1}")]
    BadVertexCount(usize, usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("triple ({0}, {1}, {2}) repeats a vertex")]
    RepeatedVertex(usize, usize, usize),
    #[error("duplicate edge ({0}, {1}, {2})")]
    DuplicateEdge(usize, usize, usize),
    #[error("duplicate vertex {0} in subset")]
    DuplicateInSubset(usize),
    #[error("arc ({0}, {0}) is a loop")]
    LoopArc(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("arcs ({0}, {1}) and ({1}, {0}) are antiparallel")]
    AntiparallelArcs(usize, usize),
    #[error("pair ({0}, {0}) is not a valid vertex pair")]
    SamePair(usize),
    #[error("expected {small} <= {large}")]
    SizeOrder { small: usize, large: usize },
    #[error("size {0} exceeds cap {1}")]
    CapExceeded(usize, usize),
    #[error("budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("height 0 is not allowed in a Kostochka spec")]
    ZeroHeight,
    #[error("repeated height {0} within class {1}")]
    RepeatedHeight(String, usize),
    #[error("heights {x} (class {a}) and {y} (class {b}) sum to zero in strict mode")]
    ZeroPairSum { a: usize, x: String, b: usize, y: String },
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("doubled embedding is structurally invalid: {0}")]
    InvalidEmbedding(String),
    #[error("certificate is inconsistent: {0}")]
    BadCertificate(String),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
