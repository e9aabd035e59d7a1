use crate::store::{NodeId, PropType};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("property `{name}` has type {existing}, update provides {provided}")]
    PropertyTypeConflict {
        name: String,
        existing: PropType,
        provided: PropType,
    },
    #[error("constant property `{0}` is already set")]
    ConstantPropertyExists(String),
    #[error("node `{0}` not found")]
    NodeNotFound(NodeId),
    #[error("edge `{src}` -> `{dst}` not found")]
    EdgeNotFound { src: NodeId, dst: NodeId },
    #[error("layer `{0}` not found")]
    LayerNotFound(String),
    #[error("graph has no events")]
    EmptyGraph,
    #[error("view contains no nodes")]
    EmptyView,
    #[error("invalid window: start {start} must precede end {end}")]
    InvalidWindow { start: i64, end: i64 },
    #[error("timestamp {0} is reserved for unbounded windows")]
    ReservedTimestamp(i64),
    #[error("time arithmetic overflowed")]
    TimeOverflow,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
