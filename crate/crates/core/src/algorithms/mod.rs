//! Static metrics over views and temporal-network algorithms over the visible
//! edge-addition stream.

mod degree;
mod motifs;
mod null_model;
mod pagerank;
mod reachability;
mod result;
mod windowed;

pub use degree::degree_stats;
pub use motifs::{motif_signatures, temporal_motifs, MotifMatrix, MotifSignature, COLUMN_KEYS, ROW_KEYS};
pub use null_model::shuffle_timestamps;
pub use pagerank::{pagerank, PageRankConfig};
pub use reachability::{temporal_reachability, ReachabilityResult};
pub use result::{top_k, view_metadata, AlgorithmResult, ResultRow, ResultValue};
pub use windowed::{motifs_over_windows, run_over_windows, Algorithm, WindowedResult};
