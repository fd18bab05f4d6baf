use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown leaf label `{0}`")]
    UnknownLeaf(String),

    #[error("self-loop on `{0}`")]
    SelfLoop(String),

    #[error("ordering is not a permutation of the vertex set: {0}")]
    NotPermutation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} has {size} labels, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("leaf set does not match vertex set: {0}")]
    LeafSetMismatch(String),

    #[error("malformed tree: {0}")]
    InvalidTree(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid RCC instance: {0}")]
    InvalidInstance(String),

    #[error("integer overflow while {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
