//! Error types shared across the library.

use crate::model::{EdgeId, NodeId};
use crate::time::{Interval, TimePoint};
use thiserror::Error;

/// Errors raised by graph construction, queries, and analyses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TvgError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("time {time} is outside the lifetime {lifetime}")]
    OutOfLifetime { time: TimePoint, lifetime: Interval },

    #[error("window {window} does not overlap the lifetime {lifetime}")]
    WindowOutOfLifetime {
        window: Interval,
        lifetime: Interval,
    },

    #[error("edge {edge} is absent at {time}")]
    EdgeAbsent { edge: EdgeId, time: TimePoint },

    #[error("journey is empty")]
    EmptyJourney,

    #[error("invalid journey: {0}")]
    InvalidJourney(String),

    #[error("source and destination are the same node {0}")]
    SameNode(NodeId),

    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("not temporally connected: no journey from {from} to {to}")]
    NotTemporallyConnected { from: NodeId, to: NodeId },

    #[error("graph has {nodes} nodes, above the exact-search cap of {cap}")]
    TooLargeForExact { nodes: usize, cap: usize },

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("bad window: {0}")]
    BadWindow(String),

    #[error("bad generator spec: {0}")]
    BadSpec(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}
