use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    degree_stats, pagerank, temporal_motifs, temporal_reachability, AlgorithmResult, MotifMatrix,
    PageRankConfig, ResultValue,
};
use crate::{GraphView, NodeId, Result, Time, Window, WindowSet};

/// A per-node algorithm that can be evaluated on any view.
#[derive(Clone, Debug, PartialEq)]
pub enum Algorithm {
    PageRank(PageRankConfig),
    Degree,
    Reachability {
        seeds: Vec<NodeId>,
        start: Time,
        max_hops: Option<usize>,
    },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::PageRank(_) => "pagerank",
            Algorithm::Degree => "degree",
            Algorithm::Reachability { .. } => "reachability",
        }
    }

    pub fn run(&self, view: &GraphView) -> Result<AlgorithmResult> {
        match self {
            Algorithm::PageRank(config) => pagerank(view, config),
            Algorithm::Degree => degree_stats(view),
            Algorithm::Reachability {
                seeds,
                start,
                max_hops,
            } => Ok(temporal_reachability(view, seeds, *start, *max_hops)?
                .with_view_metadata(view, *max_hops)),
        }
    }
}

/// Results of one algorithm over a window set: one column per window, one row
/// per node seen in any window. `None` marks a node absent from that window.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowedResult {
    pub algorithm: String,
    pub column: String,
    pub windows: Vec<Window>,
    pub rows: Vec<(NodeId, Vec<Option<ResultValue>>)>,
    /// Per-window error message, if evaluating that window failed.
    pub errors: Vec<Option<String>>,
}

impl WindowedResult {
    pub fn value(&self, node: impl Into<NodeId>, window: usize) -> Option<&ResultValue> {
        let node = node.into();
        let row = self.rows.iter().find(|(n, _)| *n == node)?;
        row.1.get(window)?.as_ref()
    }
}

/// Evaluates `algorithm` on `view` restricted to each window. Windows run in
/// parallel; results are collected in window order. Failures are recorded per
/// window and leave that window's column empty.
pub fn run_over_windows(view: &GraphView, windows: &WindowSet, algorithm: &Algorithm) -> WindowedResult {
    let results: Vec<Result<AlgorithmResult>> = windows
        .as_slice()
        .par_iter()
        .map(|w| algorithm.run(&view.window_of(w)))
        .collect();

    let mut column = String::new();
    let mut table: BTreeMap<NodeId, Vec<Option<ResultValue>>> = BTreeMap::new();
    let mut errors = Vec::with_capacity(results.len());
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(res) => {
                column = res.primary_column().to_owned();
                for row in &res.rows {
                    table
                        .entry(row.node.clone())
                        .or_insert_with(|| vec![None; windows.len()])[i] =
                        Some(row.values[res.primary].clone());
                }
                errors.push(None);
            }
            Err(e) => errors.push(Some(e.to_string())),
        }
    }
    WindowedResult {
        algorithm: algorithm.name().to_owned(),
        column,
        windows: windows.as_slice().to_vec(),
        rows: table.into_iter().collect(),
        errors,
    }
}

/// Motif matrices for each window, in window order.
pub fn motifs_over_windows(view: &GraphView, windows: &WindowSet, delta: Time) -> Result<Vec<(Window, MotifMatrix)>> {
    windows
        .as_slice()
        .par_iter()
        .map(|w| Ok((*w, temporal_motifs(&view.window_of(w), delta)?)))
        .collect()
}
