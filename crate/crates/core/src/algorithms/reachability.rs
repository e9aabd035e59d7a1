use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use super::{view_metadata, AlgorithmResult, ResultRow, ResultValue};
use crate::{GraphError, GraphView, NodeId, Result, Time};

/// Earliest arrival time of every node reachable from the seeds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReachabilityResult {
    pub start: Time,
    pub reached: BTreeMap<NodeId, Time>,
}

impl ReachabilityResult {
    pub fn arrival(&self, node: impl Into<NodeId>) -> Option<Time> {
        self.reached.get(&node.into()).copied()
    }

    pub fn to_result(&self) -> AlgorithmResult {
        let rows = self
            .reached
            .iter()
            .map(|(node, &t)| ResultRow {
                node: node.clone(),
                values: vec![ResultValue::Int(t)],
            })
            .collect();
        AlgorithmResult::new("reachability", &["arrival"], rows)
    }
}

/// Time-respecting reachability over visible edge additions.
///
/// A node is reached through a chain of additions `u0 -> u1 @ t1, ...,
/// u(k-1) -> uk @ tk` with `u0` a seed, `t1 >= start` and strictly increasing
/// timestamps. Seeds arrive at `start`. With `max_hops` only chains of at most
/// that many events count.
pub fn temporal_reachability(
    view: &GraphView,
    seeds: &[NodeId],
    start: Time,
    max_hops: Option<usize>,
) -> Result<ReachabilityResult> {
    let graph = view.graph();
    let n = graph.count_nodes();
    let mut seed_vids = Vec::with_capacity(seeds.len());
    for id in seeds {
        match graph.vid(id).filter(|&v| view.node_visible(v)) {
            Some(v) => seed_vids.push(v),
            None => return Err(GraphError::NodeNotFound(id.clone())),
        }
    }
    let events: Vec<_> = view
        .addition_events()
        .into_iter()
        .filter(|e| e.time >= start)
        .collect();

    // earliest departure allowed from each node; seeds may leave at `start`
    let mut ready: Vec<Option<Time>> = vec![None; n];
    let mut arrival: Vec<Option<Time>> = vec![None; n];
    for &s in &seed_vids {
        ready[s] = Some(start);
        arrival[s] = Some(start);
    }

    match max_hops {
        None => {
            let mut i = 0;
            while i < events.len() {
                let t = events[i].time;
                let group_end = i + events[i..].iter().take_while(|e| e.time == t).count();
                let newly: Vec<usize> = events[i..group_end]
                    .iter()
                    .filter(|e| ready[e.src].is_some_and(|r| r <= t) && arrival[e.dst].is_none())
                    .map(|e| e.dst)
                    .collect();
                for v in newly {
                    if arrival[v].is_none() {
                        arrival[v] = Some(t);
                        ready[v] = t.checked_add(1);
                    }
                }
                i = group_end;
            }
        }
        Some(hops) => {
            for _ in 0..hops {
                let mut next_arrival = arrival.clone();
                for e in &events {
                    if ready[e.src].is_some_and(|r| r <= e.time)
                        && next_arrival[e.dst].is_none_or(|a| e.time < a)
                    {
                        next_arrival[e.dst] = Some(e.time);
                    }
                }
                if next_arrival == arrival {
                    break;
                }
                arrival = next_arrival;
                for v in 0..n {
                    if seed_vids.contains(&v) {
                        continue;
                    }
                    ready[v] = arrival[v].and_then(|a| a.checked_add(1));
                }
            }
        }
    }

    let reached = arrival
        .iter()
        .enumerate()
        .filter_map(|(v, a)| a.map(|t| (graph.node_id(v).clone(), t)))
        .collect();
    Ok(ReachabilityResult { start, reached })
}

impl ReachabilityResult {
    pub fn with_view_metadata(&self, view: &GraphView, max_hops: Option<usize>) -> AlgorithmResult {
        let mut meta = view_metadata(view);
        meta.insert("start".into(), json!(self.start));
        meta.insert("max_hops".into(), json!(max_hops));
        self.to_result().with_metadata(meta)
    }
}
