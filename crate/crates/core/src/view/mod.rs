//! Lazy, composable views over a shared [`TemporalGraph`].
//!
//! A [`GraphView`] is a small value: a shared pointer to the store plus a
//! window, an optional layer set, an optional node set and a deletion
//! semantics. Refining a view allocates a new one and never touches the
//! histories; every accessor resolves presence on the fly.

mod materialise;
mod semantics;
mod window;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use semantics::{alive_intervals, AliveInterval, DeletionSemantics};
pub use window::{Window, WindowSet};

use crate::store::{EdgeRef, LayerHistory, NodeId, NodeRef, PropValue, TemporalGraph};
use crate::{GraphError, Result, Time};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
    Both,
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "out" => Ok(Direction::Out),
            "in" => Ok(Direction::In),
            "both" => Ok(Direction::Both),
            other => Err(format!("unknown direction `{other}`")),
        }
    }
}

/// One visible edge-addition event, as consumed by the temporal algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeEvent {
    pub time: Time,
    pub seq: u64,
    pub src: usize,
    pub dst: usize,
    pub layer: usize,
}

#[derive(Clone)]
pub struct GraphView {
    graph: Arc<TemporalGraph>,
    window: Window,
    /// Sorted layer indices; `None` means all layers.
    layers: Option<Arc<[usize]>>,
    /// Sorted internal node ids; `None` means all nodes.
    nodes: Option<Arc<[usize]>>,
    semantics: DeletionSemantics,
}

impl fmt::Debug for GraphView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphView")
            .field("window", &self.window)
            .field("layers", &self.layer_names())
            .field("nodes", &self.nodes.as_ref().map(|n| n.len()))
            .field("semantics", &self.semantics)
            .finish()
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

impl GraphView {
    pub fn new(graph: Arc<TemporalGraph>) -> Self {
        GraphView {
            graph,
            window: Window::ALL,
            layers: None,
            nodes: None,
            semantics: DeletionSemantics::default(),
        }
    }

    pub fn graph(&self) -> &Arc<TemporalGraph> {
        &self.graph
    }

    pub fn window_bounds(&self) -> Window {
        self.window
    }

    pub fn semantics(&self) -> DeletionSemantics {
        self.semantics
    }

    /// Names of the layers the view is restricted to, if any.
    pub fn layer_names(&self) -> Option<Vec<&str>> {
        let names = self.graph.layer_names();
        self.layers
            .as_ref()
            .map(|ls| ls.iter().map(|&l| names[l].as_str()).collect())
    }

    /// External ids of the node set the view is restricted to, if any.
    pub fn node_filter(&self) -> Option<Vec<&NodeId>> {
        self.nodes
            .as_ref()
            .map(|ns| ns.iter().map(|&v| self.graph.node_id(v)).collect())
    }

    /// Restricts to `[start, end)` intersected with the current window.
    pub fn window(&self, start: Time, end: Time) -> Result<GraphView> {
        Ok(self.window_of(&Window::new(start, end)?))
    }

    pub fn window_of(&self, w: &Window) -> GraphView {
        GraphView {
            window: self.window.intersect(w),
            ..self.clone()
        }
    }

    /// State as of `t`. Under event semantics this is every event up to and
    /// including `t`; under persistent semantics it is the edges alive at `t`.
    pub fn at(&self, t: Time) -> GraphView {
        let end = t.saturating_add(1);
        let w = match self.semantics {
            DeletionSemantics::Event => Window::until(end),
            DeletionSemantics::Persistent => Window::new(t, end).unwrap_or(Window::until(end)),
        };
        self.window_of(&w)
    }

    pub fn layers<I, S>(&self, names: I) -> Result<GraphView>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut ids = names
            .into_iter()
            .map(|name| {
                let name = name.as_ref();
                self.graph
                    .layer_id(name)
                    .ok_or_else(|| GraphError::LayerNotFound(name.to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;
        ids.sort_unstable();
        ids.dedup();
        if let Some(parent) = &self.layers {
            ids = intersect_sorted(&ids, parent);
        }
        Ok(GraphView {
            layers: Some(ids.into()),
            ..self.clone()
        })
    }

    /// Restricts to the given nodes; unknown ids are ignored.
    pub fn subgraph<I, N>(&self, ids: I) -> GraphView
    where
        I: IntoIterator<Item = N>,
        N: Into<NodeId>,
    {
        let mut vids: Vec<usize> = ids
            .into_iter()
            .filter_map(|id| self.graph.vid(&id.into()))
            .collect();
        vids.sort_unstable();
        vids.dedup();
        if let Some(parent) = &self.nodes {
            vids = intersect_sorted(&vids, parent);
        }
        GraphView {
            nodes: Some(vids.into()),
            ..self.clone()
        }
    }

    pub fn with_semantics(&self, semantics: DeletionSemantics) -> GraphView {
        GraphView {
            semantics,
            ..self.clone()
        }
    }

    /// First and last event times of the store, clipped to this view's window.
    pub fn time_span(&self) -> Option<(Time, Time)> {
        let first = self.graph.earliest_time().ok()?.max(self.window.start());
        let last = match self.window.end() {
            Time::MAX => self.graph.latest_time().ok()?,
            end => self.graph.latest_time().ok()?.min(end - 1),
        };
        (first <= last).then_some((first, last))
    }

    pub fn rolling(&self, size: Time, step: Option<Time>) -> Result<WindowSet> {
        WindowSet::rolling(self.time_span(), size, step)
    }

    pub fn expanding(&self, step: Time) -> Result<WindowSet> {
        WindowSet::expanding(self.time_span(), step)
    }

    /// One child view per window, in window order.
    pub fn views<'a>(&'a self, windows: &'a WindowSet) -> impl Iterator<Item = GraphView> + 'a {
        windows.iter().map(move |w| self.window_of(w))
    }

    // ---- presence ----

    fn passes_node_filter(&self, vid: usize) -> bool {
        self.nodes
            .as_ref()
            .is_none_or(|ns| ns.binary_search(&vid).is_ok())
    }

    fn layer_selected(&self, layer: usize) -> bool {
        self.layers
            .as_ref()
            .is_none_or(|ls| ls.binary_search(&layer).is_ok())
    }

    pub(crate) fn layer_visible(&self, history: &LayerHistory) -> bool {
        self.graph.record_scan();
        let w = &self.window;
        if w.is_empty() {
            return false;
        }
        if history.has_addition_in(w.start(), w.end()) {
            return true;
        }
        match self.semantics {
            DeletionSemantics::Event => false,
            DeletionSemantics::Persistent => alive_intervals(history).iter().any(|iv| iv.overlaps(w)),
        }
    }

    pub(crate) fn edge_visible(&self, eid: usize) -> bool {
        let edge = &self.graph.edges[eid];
        self.passes_node_filter(edge.src)
            && self.passes_node_filter(edge.dst)
            && edge
                .layers
                .iter()
                .any(|(l, h)| self.layer_selected(*l) && self.layer_visible(h))
    }

    pub(crate) fn node_visible(&self, vid: usize) -> bool {
        if !self.passes_node_filter(vid) || self.window.is_empty() {
            return false;
        }
        self.graph.record_scan();
        let node = &self.graph.nodes[vid];
        node.has_activity_in(self.window.start(), self.window.end())
            || node
                .out_edges
                .iter()
                .chain(&node.in_edges)
                .any(|&e| self.edge_visible(e))
    }

    fn candidate_nodes(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match &self.nodes {
            Some(ns) => Box::new(ns.iter().copied()),
            None => Box::new(0..self.graph.nodes.len()),
        }
    }

    fn visible_vid(&self, id: &NodeId) -> Result<usize> {
        self.graph
            .vid(id)
            .filter(|&v| self.node_visible(v))
            .ok_or_else(|| GraphError::NodeNotFound(id.clone()))
    }

    // ---- accessors ----

    /// Visible internal node ids in ascending order.
    pub(crate) fn node_vids(&self) -> Vec<usize> {
        self.candidate_nodes().filter(|&v| self.node_visible(v)).collect()
    }

    /// Visible edges ordered by (source, target) internal ids' first sight.
    pub(crate) fn edge_refs(&self) -> Vec<EdgeRef> {
        (0..self.graph.edges.len())
            .filter(|&e| self.edge_visible(e))
            .map(|eid| {
                let e = &self.graph.edges[eid];
                EdgeRef {
                    eid,
                    src: e.src,
                    dst: e.dst,
                }
            })
            .collect()
    }

    /// Visible nodes ordered by external id.
    pub fn nodes(&self) -> Vec<NodeRef> {
        let mut nodes: Vec<NodeRef> = self
            .node_vids()
            .into_iter()
            .map(|vid| NodeRef {
                id: self.graph.node_id(vid).clone(),
                vid,
            })
            .collect();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        nodes
    }

    /// Visible node ids in ascending order.
    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes().into_iter().map(|n| n.id).collect()
    }

    pub fn count_nodes(&self) -> usize {
        self.candidate_nodes().filter(|&v| self.node_visible(v)).count()
    }

    /// Number of visible directed (source, target) pairs.
    pub fn count_edges(&self) -> usize {
        (0..self.graph.edges.len())
            .filter(|&e| self.edge_visible(e))
            .count()
    }

    pub fn has_node(&self, id: impl Into<NodeId>) -> bool {
        self.visible_vid(&id.into()).is_ok()
    }

    pub fn has_edge(&self, src: impl Into<NodeId>, dst: impl Into<NodeId>) -> bool {
        self.graph
            .find_edge(&src.into(), &dst.into())
            .is_some_and(|e| self.edge_visible(e.eid))
    }

    /// Visible (source, target) pairs in ascending order.
    pub fn edge_list(&self) -> Vec<(NodeId, NodeId)> {
        let mut edges: Vec<(NodeId, NodeId)> = self
            .edge_refs()
            .into_iter()
            .map(|e| {
                (
                    self.graph.node_id(e.src).clone(),
                    self.graph.node_id(e.dst).clone(),
                )
            })
            .collect();
        edges.sort();
        edges
    }

    pub(crate) fn neighbour_vids(&self, vid: usize, dir: Direction) -> Vec<usize> {
        let node = &self.graph.nodes[vid];
        let mut out = Vec::new();
        if matches!(dir, Direction::Out | Direction::Both) {
            out.extend(
                node.out_edges
                    .iter()
                    .filter(|&&e| self.edge_visible(e))
                    .map(|&e| self.graph.edges[e].dst),
            );
        }
        if matches!(dir, Direction::In | Direction::Both) {
            out.extend(
                node.in_edges
                    .iter()
                    .filter(|&&e| self.edge_visible(e))
                    .map(|&e| self.graph.edges[e].src),
            );
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Distinct neighbours in the given direction, ordered by internal id.
    pub fn neighbours(&self, id: impl Into<NodeId>, dir: Direction) -> Result<Vec<NodeId>> {
        let vid = self.visible_vid(&id.into())?;
        let mut ids: Vec<NodeId> = self
            .neighbour_vids(vid, dir)
            .into_iter()
            .map(|v| self.graph.node_id(v).clone())
            .collect();
        ids.sort();
        Ok(ids)
    }

    /// Number of distinct neighbours in the given direction.
    pub fn degree(&self, id: impl Into<NodeId>, dir: Direction) -> Result<usize> {
        let vid = self.visible_vid(&id.into())?;
        Ok(self.neighbour_vids(vid, dir).len())
    }

    /// Latest value of a node property as seen through the view: the last
    /// update before the window end, and not before the window start under
    /// event semantics.
    pub fn node_property_latest(&self, id: impl Into<NodeId>, name: &str) -> Result<Option<PropValue>> {
        let vid = self.visible_vid(&id.into())?;
        let Some(key) = self.graph.node_keys.get(name) else {
            return Ok(None);
        };
        let lower = match self.semantics {
            DeletionSemantics::Event => self.window.start(),
            DeletionSemantics::Persistent => Time::MIN,
        };
        self.graph.record_scan();
        Ok(self.graph.nodes[vid]
            .props
            .get(&key)
            .and_then(|h| h.latest_in(lower, self.window.end()))
            .cloned())
    }

    /// Edge additions with a timestamp inside the window, on selected layers,
    /// between nodes passing the node filter, ordered by (time, sequence).
    /// Deletions and semantics do not affect this stream.
    pub fn addition_events(&self) -> Vec<EdgeEvent> {
        let w = self.window;
        let mut events = Vec::new();
        if w.is_empty() {
            return events;
        }
        for edge in &self.graph.edges {
            if !self.passes_node_filter(edge.src) || !self.passes_node_filter(edge.dst) {
                continue;
            }
            for (layer, h) in &edge.layers {
                if !self.layer_selected(*layer) {
                    continue;
                }
                self.graph.record_scan();
                events.extend(h.additions_in(w.start(), w.end()).iter().map(|a| EdgeEvent {
                    time: a.at.time,
                    seq: a.at.seq,
                    src: edge.src,
                    dst: edge.dst,
                    layer: *layer,
                }));
            }
        }
        events.sort_unstable_by_key(|e| (e.time, e.seq));
        events
    }

    pub fn earliest_time(&self) -> Result<Time> {
        self.materialise().earliest_time()
    }

    pub fn latest_time(&self) -> Result<Time> {
        self.materialise().latest_time()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NO_PROPS;

    fn chain() -> Arc<TemporalGraph> {
        let mut g = TemporalGraph::new();
        g.add_edge(1, "a", "b", NO_PROPS, None).unwrap();
        g.add_edge(2, "b", "c", NO_PROPS, None).unwrap();
        Arc::new(g)
    }

    #[test]
    fn half_open_boundaries() {
        let mut g = TemporalGraph::new();
        g.add_edge(1, "a", "b", NO_PROPS, None).unwrap();
        let g = Arc::new(g);
        assert!(g.view().window(0, 2).unwrap().has_edge("a", "b"));
        assert!(!g.view().window(2, 3).unwrap().has_edge("a", "b"));
        assert!(!g.view().window(0, 1).unwrap().has_edge("a", "b"));
    }

    #[test]
    fn nested_windows_intersect() {
        let g = chain();
        let v = g.view().window(0, 10).unwrap().window(5, 20).unwrap();
        assert_eq!(v.window_bounds(), Window::new(5, 10).unwrap());
        let empty = g.view().window(0, 2).unwrap().window(5, 9).unwrap();
        assert_eq!((empty.count_nodes(), empty.count_edges()), (0, 0));
    }

    #[test]
    fn empty_graph_window() {
        let g = Arc::new(TemporalGraph::new());
        let v = g.view().window(0, 1).unwrap();
        assert_eq!((v.count_nodes(), v.count_edges()), (0, 0));
        assert!(g.view().window(1, 0).is_err());
    }

    #[test]
    fn degree_and_neighbours() {
        let g = chain();
        let v = g.view();
        assert_eq!(v.degree("b", Direction::Both).unwrap(), 2);
        assert_eq!(v.degree("b", Direction::Out).unwrap(), 1);
        let w = v.window(2, 3).unwrap();
        assert_eq!(w.neighbours("b", Direction::Out).unwrap(), vec![NodeId::from("c")]);
        assert!(!w.has_edge("a", "b"));
        assert_eq!(
            w.degree("a", Direction::Both),
            Err(GraphError::NodeNotFound("a".into()))
        );
    }

    #[test]
    fn reciprocal_edges_are_one_neighbour() {
        let mut g = TemporalGraph::new();
        g.add_edge(1, "a", "b", NO_PROPS, None).unwrap();
        g.add_edge(2, "b", "a", NO_PROPS, None).unwrap();
        let g = Arc::new(g);
        assert_eq!(g.view().degree("a", Direction::Both).unwrap(), 1);
        assert_eq!(g.view().count_edges(), 2);
    }

    #[test]
    fn property_latest_in_window() {
        let mut g = TemporalGraph::new();
        g.add_node(1, "v", [("x", 1)]).unwrap();
        g.add_node(6, "v", [("x", 2)]).unwrap();
        let g = Arc::new(g);
        let v = g.view().window(0, 5).unwrap();
        assert_eq!(v.node_property_latest("v", "x").unwrap(), Some(PropValue::Int(1)));
        assert_eq!(g.view().node_property_latest("v", "x").unwrap(), Some(PropValue::Int(2)));
        assert_eq!(g.view().node_property_latest("v", "nope").unwrap(), None);
        // event semantics does not look before the window start
        let late = g.view().window(2, 7).unwrap();
        assert_eq!(late.node_property_latest("v", "x").unwrap(), Some(PropValue::Int(2)));
        let mid = g.view().window(2, 6).unwrap().subgraph(["v"]);
        assert!(mid.node_property_latest("v", "x").is_err());
        let persistent = g
            .view()
            .with_semantics(DeletionSemantics::Persistent)
            .window(3, 7)
            .unwrap();
        assert_eq!(persistent.node_property_latest("v", "x").unwrap(), Some(PropValue::Int(2)));
    }

    fn layered() -> Arc<TemporalGraph> {
        let mut g = TemporalGraph::new();
        g.add_edge(1, "a", "b", NO_PROPS, Some("email")).unwrap();
        g.add_edge(2, "b", "c", NO_PROPS, Some("phone")).unwrap();
        Arc::new(g)
    }

    #[test]
    fn layer_selection() {
        let g = layered();
        let email = g.view().layers(["email"]).unwrap();
        assert_eq!(email.edge_list(), vec![("a".into(), "b".into())]);
        let none = email.layers(["phone"]).unwrap();
        assert_eq!(none.count_edges(), 0);
        assert_eq!(
            g.view().layers(["fax"]).unwrap_err(),
            GraphError::LayerNotFound("fax".into())
        );
        assert_eq!(email.layer_names(), Some(vec!["email"]));
    }

    #[test]
    fn subgraph_selection() {
        let mut g = TemporalGraph::new();
        g.add_edge(1, "a", "b", NO_PROPS, None).unwrap();
        g.add_edge(2, "b", "c", NO_PROPS, None).unwrap();
        g.add_edge(3, "c", "a", NO_PROPS, None).unwrap();
        let g = Arc::new(g);
        let ab = g.view().subgraph(["a", "b", "zzz"]);
        assert_eq!(ab.edge_list(), vec![("a".into(), "b".into())]);
        assert_eq!(ab.count_nodes(), 2);
        let empty = g.view().subgraph(Vec::<NodeId>::new());
        assert_eq!((empty.count_nodes(), empty.count_edges()), (0, 0));
        let all = g.view().subgraph(["a", "b", "c"]);
        assert_eq!(all.count_nodes(), g.view().count_nodes());
        assert_eq!(all.count_edges(), g.view().count_edges());
        for n in ["a", "b", "c"] {
            assert_eq!(
                all.degree(n, Direction::Both).unwrap(),
                g.view().degree(n, Direction::Both).unwrap()
            );
        }
        // the filter narrows to {b}; b has no activity and no edge inside it
        let b = ab.subgraph(["b", "c"]);
        assert_eq!(b.node_filter(), Some(vec![&NodeId::from("b")]));
        assert_eq!(b.count_nodes(), 0);
    }

    fn add_del(adds: &[Time], dels: &[Time]) -> Arc<TemporalGraph> {
        let mut g = TemporalGraph::new();
        for &t in adds {
            g.add_edge(t, "a", "b", NO_PROPS, None).unwrap();
        }
        for &t in dels {
            g.delete_edge(t, "a", "b", None).unwrap();
        }
        Arc::new(g)
    }

    #[test]
    fn semantics_differ_on_deletions() {
        let g = add_del(&[1], &[5]);
        let w = g.view().window(2, 4).unwrap();
        assert!(!w.has_edge("a", "b"));
        assert!(w.with_semantics(DeletionSemantics::Persistent).has_edge("a", "b"));

        let g = add_del(&[], &[3]);
        let w = g.view().window(0, 10).unwrap();
        assert!(!w.has_edge("a", "b"));
        let p = w.with_semantics(DeletionSemantics::Persistent);
        assert!(p.has_edge("a", "b"));
        assert!(!p.window(3, 10).unwrap().has_edge("a", "b"));
    }

    #[test]
    fn snapshot_at() {
        let g = add_del(&[1], &[5]);
        let p = g.view().with_semantics(DeletionSemantics::Persistent);
        assert!(p.at(3).has_edge("a", "b"));
        assert!(!p.at(6).has_edge("a", "b"));
        assert!(!p.at(0).has_edge("a", "b"));
        let e = g.view();
        assert!(e.at(1).has_edge("a", "b"));
        assert_eq!(e.at(0).count_nodes(), 0);
        let latest = g.latest_time().unwrap();
        assert!(e.at(latest).has_edge("a", "b"));
    }

    #[test]
    fn construction_is_lazy() {
        let g = chain();
        let before = g.history_scans();
        let v = g
            .view()
            .window(0, 5)
            .unwrap()
            .layers(["_default"])
            .unwrap()
            .subgraph(["a", "b"])
            .with_semantics(DeletionSemantics::Persistent)
            .at(3);
        assert_eq!(g.history_scans(), before);
        v.count_edges();
        assert!(g.history_scans() > before);
    }

    #[test]
    fn rolling_over_view() {
        let mut g = TemporalGraph::new();
        for t in 0..10 {
            g.add_node(t, "a", NO_PROPS).unwrap();
        }
        let g = Arc::new(g);
        let ws = g.view().rolling(5, None).unwrap();
        assert_eq!(ws.len(), 2);
        let counts: Vec<_> = g.view().views(&ws).map(|v| v.count_nodes()).collect();
        assert_eq!(counts, vec![1, 1]);
        assert!(Arc::new(TemporalGraph::new()).view().rolling(5, None).unwrap().is_empty());
        let clipped = g.view().window(3, 7).unwrap().rolling(2, None).unwrap();
        let starts: Vec<_> = clipped.iter().map(|w| w.start()).collect();
        assert_eq!(starts, vec![3, 5]);
    }
}
