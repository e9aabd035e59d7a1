use super::{view_metadata, AlgorithmResult, ResultRow, ResultValue};
use crate::{Direction, GraphView, Result};

/// In-, out- and total degree (distinct neighbours) of every visible node.
pub fn degree_stats(view: &GraphView) -> Result<AlgorithmResult> {
    let graph = view.graph();
    let rows = view
        .node_vids()
        .into_iter()
        .map(|v| {
            let count = |dir| ResultValue::Int(view.neighbour_vids(v, dir).len() as i64);
            ResultRow {
                node: graph.node_id(v).clone(),
                values: vec![count(Direction::In), count(Direction::Out), count(Direction::Both)],
            }
        })
        .collect();
    Ok(AlgorithmResult::new("degree", &["in", "out", "total"], rows)
        .with_primary("total")
        .with_metadata(view_metadata(view)))
}
