//! Error type shared across the crate.

use crate::graph::NodeId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed line in an edge stream, snapshot file or label file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Ingestion produced no usable edges.
    #[error("no edges survived ingestion; the network is empty")]
    EmptyNetwork,

    /// A node id was queried on a snapshot that does not contain it.
    #[error("node {0} not present in this snapshot")]
    UnknownNode(NodeId),

    /// A caller violated an operation precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Index of connectivity evaluated on a community with no internal
    /// and no boundary edges.
    #[error("connectivity index undefined: community has no incident edges")]
    UndefinedObjective,

    /// Modularity evaluated on a graph without edges.
    #[error("modularity undefined on a graph without edges")]
    UndefinedModularity,

    /// A generator configuration violates its invariants.
    #[error("invalid generator config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
