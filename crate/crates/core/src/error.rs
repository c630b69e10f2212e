use thiserror::Error;

/// Errors produced while building or querying tree-shuffle objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Syntax(String),

    #[error("empty tree")]
    EmptyTree,

    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),

    #[error("tree is not pure: leaf `{label}` at depth {depth}, expected depth {expected}")]
    NotPure {
        label: String,
        depth: usize,
        expected: usize,
    },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("`{0}` is not a leaf")]
    NotALeaf(String),

    #[error("leaf `{0}` listed twice in one subset")]
    DuplicateLeaf(String),

    #[error("subset {0} listed more than once")]
    DuplicateSubset(String),

    #[error("invalid weight `{0}`")]
    InvalidWeight(String),

    #[error("negative weight {0}")]
    NegativeWeight(String),

    #[error("weights sum to {0}, expected 1")]
    WeightSum(String),

    #[error("distribution has weight on non-singleton subset {0}")]
    NotSingletonSupported(String),

    #[error("{what} has size {size}, which exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: u64,
    },

    #[error("index {index} out of range for {count} states")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid local ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("ordered partitions have different ground sets")]
    GroundSetMismatch,

    #[error("objects belong to different trees")]
    TreeMismatch,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid chain parameters: {0}")]
    InvalidCounts(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Syntax(err.to_string())
    }
}
