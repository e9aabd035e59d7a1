//! Random temporal graphs and slow, obviously-correct reference
//! implementations used to check the engine.

pub mod graphql;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use temporal_graph::{DeletionSemantics, GraphView, NodeId, TemporalGraph, Time, NO_PROPS};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Add,
    Delete,
}

/// One edge event in the order it was applied.
#[derive(Clone, Debug, PartialEq)]
pub struct RawEvent {
    pub time: Time,
    pub kind: Kind,
    pub src: NodeId,
    pub dst: NodeId,
    pub layer: String,
    pub weight: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub nodes: usize,
    pub events: usize,
    pub max_time: Time,
    pub layers: Vec<String>,
    /// Probability that an event is a deletion.
    pub deletion_rate: f64,
    pub self_loops: bool,
    /// Use string ids like `n3` instead of numbers.
    pub string_ids: bool,
    /// Attach a float weight to some additions.
    pub weights: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            nodes: 8,
            events: 40,
            max_time: 50,
            layers: vec!["_default".into()],
            deletion_rate: 0.0,
            self_loops: false,
            string_ids: false,
            weights: false,
        }
    }
}

impl GenConfig {
    pub fn sized(nodes: usize, events: usize, max_time: Time) -> Self {
        GenConfig {
            nodes,
            events,
            max_time,
            ..GenConfig::default()
        }
    }

    /// Picks sizes, layers and options at random within the given bounds.
    pub fn random(rng: &mut impl Rng, max_events: usize) -> Self {
        let nodes = rng.gen_range(2..=12);
        let layer_count = rng.gen_range(1..=3);
        GenConfig {
            nodes,
            events: rng.gen_range(0..=max_events),
            max_time: rng.gen_range(5..=200),
            layers: ["_default", "email", "chat"][..layer_count]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            deletion_rate: if rng.gen_bool(0.5) { rng.gen_range(0.0..0.4) } else { 0.0 },
            self_loops: rng.gen_bool(0.3),
            string_ids: rng.gen_bool(0.5),
            weights: rng.gen_bool(0.5),
        }
    }
}

pub struct Generated {
    pub graph: TemporalGraph,
    pub events: Vec<RawEvent>,
}

impl Generated {
    pub fn shared(&self) -> Arc<TemporalGraph> {
        Arc::new(self.graph.clone())
    }

    pub fn additions(&self) -> impl Iterator<Item = &RawEvent> {
        self.events.iter().filter(|e| e.kind == Kind::Add)
    }
}

pub fn node_name(i: usize, string_ids: bool) -> NodeId {
    if string_ids {
        NodeId::Str(format!("n{i}"))
    } else {
        NodeId::Num(i as u64)
    }
}

/// Draws a random edge log and applies it, in the drawn order, to a new graph.
pub fn generate(rng: &mut impl Rng, config: &GenConfig) -> Generated {
    let mut graph = TemporalGraph::new();
    let mut events = Vec::with_capacity(config.events);
    for _ in 0..config.events {
        let s = rng.gen_range(0..config.nodes);
        let mut d = rng.gen_range(0..config.nodes);
        if !config.self_loops && config.nodes > 1 {
            while d == s {
                d = rng.gen_range(0..config.nodes);
            }
        }
        let event = RawEvent {
            time: rng.gen_range(0..=config.max_time),
            kind: if rng.gen_bool(config.deletion_rate) { Kind::Delete } else { Kind::Add },
            src: node_name(s, config.string_ids),
            dst: node_name(d, config.string_ids),
            layer: config.layers.choose(rng).unwrap().clone(),
            weight: (config.weights && rng.gen_bool(0.5)).then(|| rng.gen_range(0..100) as f64 / 8.0),
        };
        apply(&mut graph, &event);
        events.push(event);
    }
    Generated { graph, events }
}

pub fn apply(graph: &mut TemporalGraph, e: &RawEvent) {
    match e.kind {
        Kind::Add => {
            let props: Vec<(&str, f64)> = e.weight.map(|w| ("weight", w)).into_iter().collect();
            graph
                .add_edge(e.time, e.src.clone(), e.dst.clone(), props, Some(&e.layer))
                .unwrap();
        }
        Kind::Delete => {
            graph
                .delete_edge(e.time, e.src.clone(), e.dst.clone(), Some(&e.layer))
                .unwrap();
        }
    }
}

/// Adds node activity, a few property updates and a constant to an existing
/// graph.
pub fn sprinkle_node_events(rng: &mut impl Rng, graph: &mut TemporalGraph, count: usize, max_time: Time) {
    let ids: Vec<NodeId> = (0..graph.count_nodes()).map(|v| graph.node_id(v).clone()).collect();
    if ids.is_empty() {
        return;
    }
    let id = ids.choose(rng).unwrap().clone();
    graph.add_node_constant(id, "label", "seed").unwrap();
    for _ in 0..count {
        let id = ids.choose(rng).unwrap().clone();
        let t = rng.gen_range(0..=max_time);
        if rng.gen_bool(0.5) {
            graph.add_node(t, id, [("score", rng.gen_range(0..10i64))]).unwrap();
        } else {
            graph.add_node(t, id, NO_PROPS).unwrap();
        }
    }
}

// ---------------------------------------------------------------------------
// motifs

pub const MOTIF_ROWS: [&str; 6] = ["ab ab", "ab ac", "ab ba", "ab bc", "ab ca", "ab cb"];
pub const MOTIF_COLS: [&str; 6] = ["ab", "ac", "ba", "bc", "ca", "cb"];

/// Relabels the nodes of three edges by first appearance. Returns `None` when
/// more than three distinct nodes are involved.
fn signature(edges: [(&NodeId, &NodeId); 3]) -> Option<String> {
    let mut labels: Vec<&NodeId> = Vec::new();
    let mut out = Vec::new();
    for (u, v) in edges {
        let mut pair = String::new();
        for n in [u, v] {
            let i = match labels.iter().position(|l| *l == n) {
                Some(i) => i,
                None => {
                    labels.push(n);
                    labels.len() - 1
                }
            };
            if i > 2 {
                return None;
            }
            pair.push((b'a' + i as u8) as char);
        }
        out.push(pair);
    }
    Some(out.join(" "))
}

/// Counts every ordered triple of non-self-loop additions with strictly
/// increasing times spanning at most `delta`, by explicit enumeration.
pub fn brute_force_motifs(additions: &[(Time, NodeId, NodeId)], delta: Time) -> [[u64; 6]; 6] {
    let mut events: Vec<&(Time, NodeId, NodeId)> = additions.iter().filter(|e| e.1 != e.2).collect();
    events.sort_by_key(|e| e.0);
    let mut counts = [[0u64; 6]; 6];
    for (i, e1) in events.iter().enumerate() {
        for (j, e2) in events.iter().enumerate().skip(i + 1) {
            if e2.0 - e1.0 > delta {
                break;
            }
            if e2.0 == e1.0 {
                continue;
            }
            for e3 in &events[j + 1..] {
                if e3.0 - e1.0 > delta {
                    break;
                }
                if e3.0 == e2.0 {
                    continue;
                }
                let Some(sig) = signature([(&e1.1, &e1.2), (&e2.1, &e2.2), (&e3.1, &e3.2)]) else {
                    continue;
                };
                let row = MOTIF_ROWS.iter().position(|r| *r == &sig[..5]);
                let col = MOTIF_COLS.iter().position(|c| *c == &sig[6..]);
                counts[row.expect("first edge is ab")][col.unwrap()] += 1;
            }
        }
    }
    counts
}

/// Visible additions of a view as plain tuples, for the oracles.
pub fn view_additions(view: &GraphView) -> Vec<(Time, NodeId, NodeId)> {
    view.addition_events()
        .into_iter()
        .map(|e| {
            let g = view.graph();
            (e.time, g.node_id(e.src).clone(), g.node_id(e.dst).clone())
        })
        .collect()
}

// ---------------------------------------------------------------------------
// reachability

/// Earliest arrival by exhaustive search over time-respecting event sequences.
/// The first hop may leave at `start`; every later hop must be strictly later
/// than the one before. Visited (node, last hop time, hops) states are pruned.
pub fn brute_force_reachability(
    additions: &[(Time, NodeId, NodeId)],
    seeds: &[NodeId],
    start: Time,
    max_hops: Option<usize>,
) -> BTreeMap<NodeId, Time> {
    struct Search<'a> {
        additions: &'a [(Time, NodeId, NodeId)],
        start: Time,
        limit: usize,
        best: BTreeMap<NodeId, Time>,
        seen: HashSet<(NodeId, Option<Time>, usize)>,
    }

    impl Search<'_> {
        fn dfs(&mut self, node: &NodeId, last: Option<Time>, hops: usize) {
            // without a hop limit the hop count never matters
            let key_hops = if self.limit == usize::MAX { 0 } else { hops };
            if !self.seen.insert((node.clone(), last, key_hops)) || hops >= self.limit {
                return;
            }
            let additions = self.additions;
            for (t, u, v) in additions {
                if u != node {
                    continue;
                }
                let ok = match last {
                    None => *t >= self.start,
                    Some(l) => *t > l,
                };
                if !ok {
                    continue;
                }
                let entry = self.best.entry(v.clone()).or_insert(*t);
                if *t < *entry {
                    *entry = *t;
                }
                self.dfs(v, Some(*t), hops + 1);
            }
        }
    }

    let mut search = Search {
        additions,
        start,
        limit: max_hops.unwrap_or(usize::MAX),
        best: seeds.iter().map(|s| (s.clone(), start)).collect(),
        seen: HashSet::new(),
    };
    for s in seeds {
        search.dfs(s, None, 0);
    }
    search.best
}

// ---------------------------------------------------------------------------
// pagerank

/// Dense power iteration over an explicit node list and edge set, iterated
/// far past convergence. Dangling mass is spread uniformly.
pub fn dense_pagerank(nodes: &[NodeId], edges: &[(NodeId, NodeId)], damping: f64) -> BTreeMap<NodeId, f64> {
    let n = nodes.len();
    let index: HashMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, id)| (id, i)).collect();
    let mut adj = vec![vec![0.0f64; n]; n];
    let pairs: BTreeSet<(usize, usize)> = edges.iter().map(|(s, d)| (index[s], index[d])).collect();
    let mut out_degree = vec![0usize; n];
    for &(s, d) in &pairs {
        adj[s][d] = 1.0;
        out_degree[s] += 1;
    }
    let mut rank = vec![1.0 / n as f64; n];
    for _ in 0..10_000 {
        let mut next = vec![0.0; n];
        for (j, slot) in next.iter_mut().enumerate() {
            let mut incoming = 0.0;
            for i in 0..n {
                incoming += if out_degree[i] == 0 {
                    rank[i] / n as f64
                } else {
                    adj[i][j] * rank[i] / out_degree[i] as f64
                };
            }
            *slot = (1.0 - damping) / n as f64 + damping * incoming;
        }
        let diff: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if diff < 1e-15 {
            break;
        }
    }
    nodes.iter().cloned().zip(rank).collect()
}

// ---------------------------------------------------------------------------
// deletion semantics

/// Whether an edge layer with the given events, in log order, is alive at
/// instant `x` under persistent semantics. Deletions before the first addition
/// mean the edge was alive from the start of time until the last of them.
pub fn alive_at(log: &[(Time, Kind)], x: Time) -> bool {
    let first_add = log.iter().position(|e| e.1 == Kind::Add).unwrap_or(log.len());
    if let Some(last_leading) = log[..first_add].last() {
        if x < last_leading.0 {
            return true;
        }
    }
    let mut alive = false;
    for &(t, kind) in &log[first_add..] {
        if t > x {
            break;
        }
        alive = kind == Kind::Add;
    }
    alive
}

/// Presence of an edge layer in `[start, end)`: an addition inside the window,
/// or alive at some instant of the window under persistent semantics.
pub fn present_in(log: &[(Time, Kind)], start: Time, end: Time, semantics: DeletionSemantics) -> bool {
    if log.iter().any(|&(t, k)| k == Kind::Add && start <= t && t < end) {
        return true;
    }
    if semantics == DeletionSemantics::Event || start >= end {
        return false;
    }
    std::iter::once(start)
        .chain(log.iter().map(|e| e.0).filter(|&t| start <= t && t < end))
        .any(|x| alive_at(log, x))
}

/// Per (src, dst, layer) event logs sorted stably by time.
pub fn layer_logs(events: &[RawEvent]) -> BTreeMap<(NodeId, NodeId, String), Vec<(Time, Kind)>> {
    let mut logs: BTreeMap<(NodeId, NodeId, String), Vec<(Time, Kind)>> = BTreeMap::new();
    for e in events {
        logs.entry((e.src.clone(), e.dst.clone(), e.layer.clone()))
            .or_default()
            .push((e.time, e.kind));
    }
    for log in logs.values_mut() {
        log.sort_by_key(|e| e.0);
    }
    logs
}

/// Edge pairs present in `[start, end)` on any of `layers` (all if `None`),
/// computed from the raw log.
pub fn oracle_edges(
    events: &[RawEvent],
    start: Time,
    end: Time,
    layers: Option<&[String]>,
    semantics: DeletionSemantics,
) -> BTreeSet<(NodeId, NodeId)> {
    layer_logs(events)
        .into_iter()
        .filter(|((_, _, l), _)| layers.is_none_or(|ls| ls.contains(l)))
        .filter(|(_, log)| present_in(log, start, end, semantics))
        .map(|((s, d, _), _)| (s, d))
        .collect()
}

// ---------------------------------------------------------------------------
// views

/// Applies a random stack of window, layer, subgraph and semantics
/// constraints. Returns the view and a readable description of the stack.
pub fn random_view(rng: &mut impl Rng, graph: &Arc<TemporalGraph>, max_time: Time) -> (GraphView, String) {
    let mut view = graph.view();
    let mut steps = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        match rng.gen_range(0..5) {
            0 => {
                let a = rng.gen_range(-5..=max_time + 5);
                let b = a + rng.gen_range(1..=max_time.max(1) + 5);
                view = view.window(a, b).unwrap();
                steps.push(format!("window({a},{b})"));
            }
            1 => {
                let t = rng.gen_range(0..=max_time);
                view = view.at(t);
                steps.push(format!("at({t})"));
            }
            2 => {
                let names: Vec<String> = graph
                    .layer_names()
                    .iter()
                    .filter(|_| rng.gen_bool(0.6))
                    .cloned()
                    .collect();
                if let Ok(v) = view.layers(&names) {
                    view = v;
                    steps.push(format!("layers({names:?})"));
                }
            }
            3 => {
                let ids: Vec<NodeId> = (0..graph.count_nodes())
                    .filter(|_| rng.gen_bool(0.6))
                    .map(|v| graph.node_id(v).clone())
                    .collect();
                steps.push(format!("subgraph({} nodes)", ids.len()));
                view = view.subgraph(ids);
            }
            _ => {
                let s = if rng.gen_bool(0.5) {
                    DeletionSemantics::Persistent
                } else {
                    DeletionSemantics::Event
                };
                view = view.with_semantics(s);
                steps.push(format!("semantics({s})"));
            }
        }
    }
    (view, steps.join("."))
}

/// Everything the accessors report about a view, in comparable form.
#[derive(Clone, Debug, PartialEq)]
pub struct ViewSummary {
    pub nodes: Vec<NodeId>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
    pub count_nodes: usize,
    pub count_edges: usize,
    pub degrees: Vec<(NodeId, usize, usize, usize)>,
    pub earliest: Option<Time>,
    pub latest: Option<Time>,
}

pub fn summarise(view: &GraphView) -> ViewSummary {
    use temporal_graph::Direction;
    let mut nodes = view.node_ids();
    nodes.sort();
    let degrees = nodes
        .iter()
        .map(|n| {
            (
                n.clone(),
                view.degree(n, Direction::In).unwrap(),
                view.degree(n, Direction::Out).unwrap(),
                view.degree(n, Direction::Both).unwrap(),
            )
        })
        .collect();
    ViewSummary {
        edges: view.edge_list().into_iter().collect(),
        count_nodes: view.count_nodes(),
        count_edges: view.count_edges(),
        earliest: view.earliest_time().ok(),
        latest: view.latest_time().ok(),
        nodes,
        degrees,
    }
}

/// The summary of a view's materialisation queried under the view's semantics.
pub fn summarise_materialised(view: &GraphView) -> ViewSummary {
    let copy = Arc::new(view.materialise());
    summarise(&copy.view().with_semantics(view.semantics()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: u64) -> NodeId {
        NodeId::Num(i)
    }

    #[test]
    fn motif_oracle_small_cases() {
        let events = vec![(1, n(1), n(2)), (2, n(2), n(1)), (3, n(1), n(2))];
        let counts = brute_force_motifs(&events, 10);
        assert_eq!(counts[2][0], 1);
        assert_eq!(counts.iter().flatten().sum::<u64>(), 1);
        assert_eq!(brute_force_motifs(&events, 1).iter().flatten().sum::<u64>(), 0);
    }

    #[test]
    fn reachability_oracle_small_cases() {
        let chain = vec![(1, n(0), n(1)), (2, n(1), n(2))];
        let r = brute_force_reachability(&chain, &[n(0)], 0, None);
        assert_eq!(r, BTreeMap::from([(n(0), 0), (n(1), 1), (n(2), 2)]));
        let broken = vec![(2, n(0), n(1)), (1, n(1), n(2))];
        let r = brute_force_reachability(&broken, &[n(0)], 0, None);
        assert_eq!(r, BTreeMap::from([(n(0), 0), (n(1), 2)]));
        assert_eq!(brute_force_reachability(&chain, &[n(0)], 0, Some(1)).len(), 2);
    }

    #[test]
    fn alive_oracle() {
        use Kind::*;
        let log = [(1, Add), (5, Delete), (9, Add)];
        let alive: Vec<Time> = (0..12).filter(|&x| alive_at(&log, x)).collect();
        assert_eq!(alive, vec![1, 2, 3, 4, 9, 10, 11]);
        let leading = [(3, Delete)];
        assert!(alive_at(&leading, Time::MIN));
        assert!(alive_at(&leading, 2));
        assert!(!alive_at(&leading, 3));
        assert!(present_in(&leading, 0, 10, DeletionSemantics::Persistent));
        assert!(!present_in(&leading, 0, 10, DeletionSemantics::Event));
    }

    #[test]
    fn dense_pagerank_cycle() {
        let nodes = [n(0), n(1), n(2)];
        let edges = [(n(0), n(1)), (n(1), n(2)), (n(2), n(0))];
        for v in dense_pagerank(&nodes, &edges, 0.85).values() {
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}
