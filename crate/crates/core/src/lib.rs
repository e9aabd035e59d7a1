//! An embeddable temporal property-graph engine.
//!
//! Every structural and property change is recorded as a timestamped event in a
//! [`TemporalGraph`]. Reads go through [`GraphView`]s: immutable stacks of
//! constraints (time window, layers, node subset, deletion semantics) that are
//! resolved lazily against the shared store. Algorithms in [`algorithms`] run on
//! any view, and [`io`] loads delimited edge tables and exports views and results.
//!
//! ```
//! use std::sync::Arc;
//! use temporal_graph::{TemporalGraph, NO_PROPS};
//!
//! let mut g = TemporalGraph::new();
//! g.add_edge(1, "a", "b", NO_PROPS, None).unwrap();
//! g.add_edge(2, "b", "c", NO_PROPS, None).unwrap();
//! let g = Arc::new(g);
//!
//! let view = g.view().window(2, 3).unwrap();
//! assert_eq!(view.count_edges(), 1);
//! ```

pub mod algorithms;
mod error;
pub mod io;
pub mod store;
pub mod view;

pub use error::GraphError;
pub use store::{
    EdgeRef, EventTime, NodeId, NodeRef, PropType, PropValue, TemporalGraph, Time, Update,
    UpdateEvent, DEFAULT_LAYER, NO_PROPS,
};
pub use view::{DeletionSemantics, Direction, GraphView, Window, WindowSet};

pub type Result<T, E = GraphError> = std::result::Result<T, E>;
