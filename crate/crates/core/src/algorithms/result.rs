use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{GraphError, GraphView, NodeId, Result, Time};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ResultValue {
    Int(i64),
    Float(f64),
    Null,
}

impl ResultValue {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            ResultValue::Int(v) => Some(v as f64),
            ResultValue::Float(v) => Some(v),
            ResultValue::Null => None,
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ResultValue::Int(a), ResultValue::Int(b)) => a.cmp(b),
            (ResultValue::Null, ResultValue::Null) => Ordering::Equal,
            (ResultValue::Null, _) => Ordering::Less,
            (_, ResultValue::Null) => Ordering::Greater,
            (a, b) => a.as_f64().unwrap().total_cmp(&b.as_f64().unwrap()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub node: NodeId,
    pub values: Vec<ResultValue>,
}

/// A per-node result table. Rows are sorted by external node id.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgorithmResult {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<ResultRow>,
    /// Index into `columns` used for ranking and windowed tables.
    pub primary: usize,
    pub metadata: BTreeMap<String, Value>,
}

impl AlgorithmResult {
    pub fn new(name: &str, columns: &[&str], mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by(|a, b| a.node.cmp(&b.node));
        AlgorithmResult {
            name: name.to_owned(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
            primary: 0,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_primary(mut self, column: &str) -> Self {
        self.primary = self.columns.iter().position(|c| c == column).unwrap_or(0);
        self
    }

    pub fn with_metadata(mut self, metadata: BTreeMap<String, Value>) -> Self {
        self.metadata.extend(metadata);
        self
    }

    pub fn primary_column(&self) -> &str {
        &self.columns[self.primary]
    }

    pub fn row(&self, node: impl Into<NodeId>) -> Option<&ResultRow> {
        let node = node.into();
        self.rows
            .binary_search_by(|r| r.node.cmp(&node))
            .ok()
            .map(|i| &self.rows[i])
    }

    /// Primary value of a node as a float.
    pub fn get(&self, node: impl Into<NodeId>) -> Option<f64> {
        self.row(node)?.values[self.primary].as_f64()
    }

    pub fn top_k(&self, k: usize) -> Result<Vec<(NodeId, ResultValue)>> {
        top_k(self, k)
    }
}

/// Rows ranked by primary value descending, ties broken by ascending node id.
pub fn top_k(result: &AlgorithmResult, k: usize) -> Result<Vec<(NodeId, ResultValue)>> {
    if k == 0 {
        return Err(GraphError::InvalidArgument("k must be positive".into()));
    }
    let mut ranked: Vec<(NodeId, ResultValue)> = result
        .rows
        .iter()
        .map(|r| (r.node.clone(), r.values[result.primary].clone()))
        .collect();
    ranked.sort_by(|a, b| b.1.order(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

fn bound(t: Time) -> Value {
    if t == Time::MIN || t == Time::MAX {
        Value::Null
    } else {
        json!(t)
    }
}

/// The constraint stack of a view, for recording alongside results.
pub fn view_metadata(view: &GraphView) -> BTreeMap<String, Value> {
    let w = view.window_bounds();
    let mut m = BTreeMap::new();
    m.insert("window_start".into(), bound(w.start()));
    m.insert("window_end".into(), bound(w.end()));
    m.insert("layers".into(), json!(view.layer_names()));
    m.insert(
        "node_filter".into(),
        json!(view.node_filter().map(|ids| ids.iter().map(|id| id.to_string()).collect::<Vec<_>>())),
    );
    m.insert("semantics".into(), json!(view.semantics().to_string()));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scores(pairs: &[(&str, f64)]) -> AlgorithmResult {
        AlgorithmResult::new(
            "score",
            &["score"],
            pairs
                .iter()
                .map(|(n, v)| ResultRow {
                    node: (*n).into(),
                    values: vec![ResultValue::Float(*v)],
                })
                .collect(),
        )
    }

    #[test]
    fn ties_order_by_node_id() {
        let r = scores(&[("c", 0.2), ("a", 0.2), ("b", 0.6)]);
        let top: Vec<_> = r.top_k(3).unwrap().into_iter().map(|(n, _)| n).collect();
        assert_eq!(top, vec!["b".into(), "a".into(), "c".into()]);
    }

    #[test]
    fn k_larger_than_rows_returns_all() {
        let r = scores(&[("a", 0.5), ("b", 0.5)]);
        assert_eq!(r.top_k(10).unwrap().len(), 2);
        assert!(r.top_k(0).is_err());
    }

    #[test]
    fn rows_sorted_and_looked_up() {
        let r = scores(&[("z", 1.0), ("a", 2.0)]);
        assert_eq!(r.rows[0].node, NodeId::from("a"));
        assert_eq!(r.get("z"), Some(1.0));
        assert_eq!(r.get("q"), None);
    }
}
