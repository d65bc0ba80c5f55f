use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit position {position} out of range for universe of {universe} bits")]
    PositionOutOfRange { position: u64, universe: u64 },

    #[error("bit positions must be strictly ascending (offending position {position})")]
    NotAscending { position: u64 },

    #[error("universe size mismatch: {left} vs {right}")]
    UniverseMismatch { left: u64, right: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph contains a cycle through node {node} after SCC collapse")]
    Cycle { node: u32 },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node id {0} out of range")]
    InvalidNodeId(u32),

    #[error("index file: bad magic {found:?}")]
    BadMagic { found: [u8; 4] },

    #[error("index file: unsupported version {0}")]
    UnsupportedVersion(u16),

    #[error("index file truncated while reading {0}")]
    Truncated(&'static str),

    #[error("index file checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },

    #[error("index file corrupt: {0}")]
    Corrupt(String),

    #[error("oracle refuses graphs above {limit} edges (got {edges})")]
    OracleTooLarge { edges: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has no leaf with an incoming edge; cannot sample paths")]
    NoPaths,

    #[error("query exceeded its deadline")]
    Timeout,

    #[error(transparent)]
    Io(#[from] io::Error),
}
