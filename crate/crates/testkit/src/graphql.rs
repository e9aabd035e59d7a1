//! Random GraphQL queries paired with the response the library implies.

use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Map, Value};
use temporal_graph::algorithms::{degree_stats, pagerank, temporal_motifs, temporal_reachability, PageRankConfig};
use temporal_graph::{DeletionSemantics, Direction, GraphView, NodeId, TemporalGraph, Time};

pub struct QueryCase {
    pub query: String,
    /// The expected `data` member of the response.
    pub expected: Value,
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).unwrap()
}

fn id_list(ids: &[NodeId]) -> String {
    let parts: Vec<String> = ids.iter().map(|id| quote(&id.to_string())).collect();
    format!("[{}]", parts.join(", "))
}

fn ids_json(ids: &[NodeId]) -> Vec<Value> {
    ids.iter().map(|id| json!(id.to_string())).collect()
}

/// Builds a query against graph `name` with a random chain of view fields,
/// a random selection of accessors and one algorithm, and computes the data
/// the service should return by calling the library directly.
pub fn random_case(rng: &mut impl Rng, name: &str, graph: &Arc<TemporalGraph>, max_time: Time) -> QueryCase {
    let mut view = graph.view();
    let mut chain: Vec<(String, String)> = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        match rng.gen_range(0..5) {
            0 => {
                let a = rng.gen_range(-3..=max_time);
                let b = a + rng.gen_range(1..=max_time.max(1) + 3);
                view = view.window(a, b).unwrap();
                chain.push(("window".into(), format!("window(start: {a}, end: {b})")));
            }
            1 => {
                let t = rng.gen_range(0..=max_time);
                view = view.at(t);
                chain.push(("at".into(), format!("at(time: {t})")));
            }
            2 => {
                let names: Vec<String> = graph
                    .layer_names()
                    .iter()
                    .filter(|_| rng.gen_bool(0.6))
                    .cloned()
                    .collect();
                view = view.layers(&names).unwrap();
                let list: Vec<String> = names.iter().map(|n| quote(n)).collect();
                chain.push(("layers".into(), format!("layers(names: [{}])", list.join(", "))));
            }
            3 => {
                let ids: Vec<NodeId> = (0..graph.count_nodes())
                    .filter(|_| rng.gen_bool(0.6))
                    .map(|v| graph.node_id(v).clone())
                    .collect();
                view = view.subgraph(ids.clone());
                chain.push(("subgraph".into(), format!("subgraph(ids: {})", id_list(&ids))));
            }
            _ => {
                let (s, lit) = if rng.gen_bool(0.5) {
                    (DeletionSemantics::Persistent, "PERSISTENT")
                } else {
                    (DeletionSemantics::Event, "EVENT")
                };
                view = view.with_semantics(s);
                chain.push(("semantics".into(), format!("semantics(kind: {lit})")));
            }
        }
    }

    let (selection, leaf) = leaf_selection(rng, &view, max_time);
    let mut query = selection;
    let mut expected = leaf;
    for (field, call) in chain.iter().rev() {
        query = format!("{call} {{ {query} }}");
        expected = json!({ field.as_str(): expected });
    }
    QueryCase {
        query: format!("{{ graph(name: {}) {{ {query} }} }}", quote(name)),
        expected: json!({ "graph": expected }),
    }
}

fn leaf_selection(rng: &mut impl Rng, view: &GraphView, max_time: Time) -> (String, Value) {
    let mut fields = Vec::new();
    let mut out = Map::new();
    if rng.gen_bool(0.7) {
        fields.push("countNodes countEdges".to_owned());
        out.insert("countNodes".into(), json!(view.count_nodes()));
        out.insert("countEdges".into(), json!(view.count_edges()));
    }
    if rng.gen_bool(0.4) {
        fields.push("earliestTime latestTime".to_owned());
        out.insert("earliestTime".into(), json!(view.earliest_time().ok()));
        out.insert("latestTime".into(), json!(view.latest_time().ok()));
    }
    let ids = view.node_ids();
    if rng.gen_bool(0.5) {
        let offset = rng.gen_range(0..=ids.len());
        let limit = rng.gen_range(1..=5);
        fields.push(format!(
            "nodes(offset: {offset}, limit: {limit}) {{ total offset items {{ id inDegree outDegree degree }} }}"
        ));
        let items: Vec<Value> = ids
            .iter()
            .skip(offset)
            .take(limit)
            .map(|id| {
                json!({
                    "id": id.to_string(),
                    "inDegree": view.degree(id, Direction::In).unwrap(),
                    "outDegree": view.degree(id, Direction::Out).unwrap(),
                    "degree": view.degree(id, Direction::Both).unwrap(),
                })
            })
            .collect();
        out.insert("nodes".into(), json!({"total": ids.len(), "offset": offset, "items": items}));
    }
    if rng.gen_bool(0.3) {
        fields.push("edges { total items { src dst } }".to_owned());
        let edges = view.edge_list();
        let items: Vec<Value> = edges
            .iter()
            .map(|(s, d)| json!({"src": s.to_string(), "dst": d.to_string()}))
            .collect();
        out.insert("edges".into(), json!({"total": edges.len(), "items": items}));
    }
    if !ids.is_empty() && rng.gen_bool(0.3) {
        let id = &ids[rng.gen_range(0..ids.len())];
        fields.push(format!("node(id: {}) {{ id neighbours(direction: OUT) history }}", quote(&id.to_string())));
        let w = view.window_bounds();
        let history: Vec<Time> = view
            .graph()
            .node_history(id)
            .unwrap()
            .into_iter()
            .filter(|t| w.contains(*t))
            .collect();
        out.insert(
            "node".into(),
            json!({
                "id": id.to_string(),
                "neighbours": ids_json(&view.neighbours(id, Direction::Out).unwrap()),
                "history": history,
            }),
        );
    }

    let (algo_query, algo_value) = match rng.gen_range(0..4) {
        0 if !ids.is_empty() => {
            let damping = [0.5, 0.85, 0.9][rng.gen_range(0..3)];
            let config = PageRankConfig {
                damping,
                ..Default::default()
            };
            let r = pagerank(view, &config).unwrap();
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| json!({"node": row.node.to_string(), "score": row.values[0].as_f64().unwrap()}))
                .collect();
            (format!("pagerank(damping: {damping:?}) {{ node score }}"), json!({ "pagerank": rows }))
        }
        1 => {
            let delta = rng.gen_range(1..=max_time.max(1));
            let m = temporal_motifs(view, delta).unwrap();
            (
                format!("temporalMotifs(delta: {delta}) {{ delta total counts }}"),
                json!({ "temporalMotifs": { "delta": delta, "total": m.total(), "counts": m.counts } }),
            )
        }
        2 if !ids.is_empty() => {
            let seeds: Vec<NodeId> = vec![ids[rng.gen_range(0..ids.len())].clone()];
            let start = rng.gen_range(-2..=max_time);
            let r = temporal_reachability(view, &seeds, start, None).unwrap();
            let rows: Vec<Value> = r
                .reached
                .iter()
                .map(|(n, t)| json!({"node": n.to_string(), "arrival": t}))
                .collect();
            (
                format!("temporalReachability(seeds: {}, start: {start}) {{ node arrival }}", id_list(&seeds)),
                json!({ "temporalReachability": rows }),
            )
        }
        _ => {
            let r = degree_stats(view).unwrap();
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| json!({"node": row.node.to_string(), "total": row.values[2]}))
                .collect();
            ("degree { node total }".to_owned(), json!({ "degree": rows }))
        }
    };
    fields.push(format!("algorithms {{ {algo_query} }}"));
    out.insert("algorithms".into(), algo_value);
    (fields.join(" "), Value::Object(out))
}
