//! The base temporal graph: an append-only chronological log of node, edge and
//! property updates, indexed per entity so that views can answer time-range
//! queries without replaying the log.

mod events;
mod history;
mod ids;
mod props;

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use events::{Update, UpdateEvent};
pub use history::{EventTime, LayerHistory};
pub use ids::{EdgeRef, NodeId, NodeRef};
pub use props::{PropHistory, PropType, PropValue};

pub(crate) use history::{insert_sorted, Addition, EdgeStore, NodeStore};
pub(crate) use props::Interner;

use crate::{GraphError, GraphView, Result};

/// Timestamps are unit-agnostic signed ticks.
pub type Time = i64;

pub const DEFAULT_LAYER: &str = "_default";

/// Empty property list for updates that carry no properties.
pub const NO_PROPS: [(&str, PropValue); 0] = [];

#[derive(Debug, Default)]
struct ScanCounter(AtomicU64);

impl Clone for ScanCounter {
    fn clone(&self) -> Self {
        ScanCounter(AtomicU64::new(self.0.load(Ordering::Relaxed)))
    }
}

#[derive(Clone, Debug)]
pub struct TemporalGraph {
    pub(crate) nodes: Vec<NodeStore>,
    node_index: HashMap<NodeId, usize>,
    pub(crate) edges: Vec<EdgeStore>,
    edge_index: HashMap<(usize, usize), usize>,
    layers: Vec<String>,
    layer_index: HashMap<String, usize>,
    pub(crate) node_keys: Interner,
    pub(crate) edge_keys: Interner,
    pub(crate) graph_keys: Interner,
    pub(crate) graph_props: HashMap<usize, PropHistory>,
    pub(crate) graph_updates: Vec<EventTime>,
    pub(crate) graph_constants: BTreeMap<String, PropValue>,
    bounds: Option<(Time, Time)>,
    next_seq: u64,
    scans: ScanCounter,
}

impl Default for TemporalGraph {
    fn default() -> Self {
        Self::new()
    }
}

fn collect_props<P, K, V>(props: P) -> Vec<(String, PropValue)>
where
    P: IntoIterator<Item = (K, V)>,
    K: AsRef<str>,
    V: Into<PropValue>,
{
    props
        .into_iter()
        .map(|(k, v)| (k.as_ref().to_owned(), v.into()))
        .collect()
}

/// Rejects updates whose names already carry a different type, either in the
/// stored histories (looked up through `existing`) or earlier in the same update.
fn check_types(
    props: &[(String, PropValue)],
    existing: impl Fn(&str) -> Option<PropType>,
) -> Result<()> {
    let mut seen: HashMap<&str, PropType> = HashMap::new();
    for (name, value) in props {
        let expected = seen.get(name.as_str()).copied().or_else(|| existing(name));
        if let Some(expected) = expected {
            if expected != value.dtype() {
                return Err(GraphError::PropertyTypeConflict {
                    name: name.clone(),
                    existing: expected,
                    provided: value.dtype(),
                });
            }
        }
        seen.insert(name, value.dtype());
    }
    Ok(())
}

fn check_time(t: Time) -> Result<()> {
    if t == Time::MIN || t == Time::MAX {
        Err(GraphError::ReservedTimestamp(t))
    } else {
        Ok(())
    }
}

impl TemporalGraph {
    pub fn new() -> Self {
        let mut g = TemporalGraph {
            nodes: Vec::new(),
            node_index: HashMap::new(),
            edges: Vec::new(),
            edge_index: HashMap::new(),
            layers: Vec::new(),
            layer_index: HashMap::new(),
            node_keys: Interner::default(),
            edge_keys: Interner::default(),
            graph_keys: Interner::default(),
            graph_props: HashMap::new(),
            graph_updates: Vec::new(),
            graph_constants: BTreeMap::new(),
            bounds: None,
            next_seq: 0,
            scans: ScanCounter::default(),
        };
        g.register_layer(DEFAULT_LAYER);
        g
    }

    /// An unconstrained view over this graph.
    pub fn view(self: &Arc<Self>) -> GraphView {
        GraphView::new(Arc::clone(self))
    }

    fn next_event(&mut self, t: Time) -> EventTime {
        let at = EventTime {
            time: t,
            seq: self.next_seq,
        };
        self.next_seq += 1;
        self.bounds = Some(match self.bounds {
            None => (t, t),
            Some((lo, hi)) => (lo.min(t), hi.max(t)),
        });
        at
    }

    fn ensure_node(&mut self, id: NodeId) -> usize {
        if let Some(&vid) = self.node_index.get(&id) {
            return vid;
        }
        let vid = self.nodes.len();
        self.node_index.insert(id.clone(), vid);
        self.nodes.push(NodeStore::new(id));
        vid
    }

    pub(crate) fn register_layer(&mut self, name: &str) -> usize {
        if let Some(&l) = self.layer_index.get(name) {
            return l;
        }
        let l = self.layers.len();
        self.layers.push(name.to_owned());
        self.layer_index.insert(name.to_owned(), l);
        l
    }

    fn ensure_edge(&mut self, src: usize, dst: usize) -> usize {
        if let Some(&eid) = self.edge_index.get(&(src, dst)) {
            return eid;
        }
        let eid = self.edges.len();
        self.edges.push(EdgeStore::new(src, dst));
        self.edge_index.insert((src, dst), eid);
        self.nodes[src].out_edges.push(eid);
        self.nodes[dst].in_edges.push(eid);
        eid
    }

    fn node_prop_type(&self, id: &NodeId, name: &str) -> Option<PropType> {
        let node = &self.nodes[*self.node_index.get(id)?];
        let key = self.node_keys.get(name)?;
        node.props.get(&key)?.dtype()
    }

    fn write_node_props(&mut self, vid: usize, at: EventTime, props: Vec<(String, PropValue)>) {
        for (name, value) in props {
            let key = self.node_keys.intern(&name);
            self.nodes[vid].props.entry(key).or_default().insert(at, value);
        }
    }

    /// Records activity of a node at `t`, creating the node on first sight, and
    /// appends each property to the node's history.
    pub fn add_node<P, K, V>(&mut self, t: Time, id: impl Into<NodeId>, props: P) -> Result<NodeRef>
    where
        P: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<PropValue>,
    {
        check_time(t)?;
        let id = id.into();
        let props = collect_props(props);
        check_types(&props, |name| self.node_prop_type(&id, name))?;
        let vid = self.ensure_node(id.clone());
        let at = self.next_event(t);
        insert_sorted(&mut self.nodes[vid].activity, at);
        self.write_node_props(vid, at, props);
        Ok(NodeRef { id, vid })
    }

    /// Node removal is recorded as plain activity; presence in views is driven
    /// by activity and incident edges only.
    pub fn delete_node(&mut self, t: Time, id: impl Into<NodeId>) -> Result<NodeRef> {
        self.add_node(t, id, NO_PROPS)
    }

    /// Property update on a node that does not count as node activity.
    pub(crate) fn set_node_props(
        &mut self,
        t: Time,
        id: NodeId,
        props: Vec<(String, PropValue)>,
    ) -> Result<NodeRef> {
        check_time(t)?;
        check_types(&props, |name| self.node_prop_type(&id, name))?;
        let vid = self.ensure_node(id.clone());
        let at = self.next_event(t);
        insert_sorted(&mut self.nodes[vid].prop_updates, at);
        self.write_node_props(vid, at, props);
        Ok(NodeRef { id, vid })
    }

    /// Sets a time-independent property; each name can be set once per node.
    pub fn add_node_constant(
        &mut self,
        id: impl Into<NodeId>,
        name: &str,
        value: impl Into<PropValue>,
    ) -> Result<NodeRef> {
        let id = id.into();
        if let Some(&vid) = self.node_index.get(&id) {
            if self.nodes[vid].constants.contains_key(name) {
                return Err(GraphError::ConstantPropertyExists(name.to_owned()));
            }
        }
        let vid = self.ensure_node(id.clone());
        self.nodes[vid].constants.insert(name.to_owned(), value.into());
        Ok(NodeRef { id, vid })
    }

    pub fn add_graph_props<P, K, V>(&mut self, t: Time, props: P) -> Result<()>
    where
        P: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<PropValue>,
    {
        check_time(t)?;
        let props = collect_props(props);
        check_types(&props, |name| {
            let key = self.graph_keys.get(name)?;
            self.graph_props.get(&key)?.dtype()
        })?;
        let at = self.next_event(t);
        insert_sorted(&mut self.graph_updates, at);
        for (name, value) in props {
            let key = self.graph_keys.intern(&name);
            self.graph_props.entry(key).or_default().insert(at, value);
        }
        Ok(())
    }

    pub fn add_graph_constant(&mut self, name: &str, value: impl Into<PropValue>) -> Result<()> {
        if self.graph_constants.contains_key(name) {
            return Err(GraphError::ConstantPropertyExists(name.to_owned()));
        }
        self.graph_constants.insert(name.to_owned(), value.into());
        Ok(())
    }

    /// Appends an addition event for `src -> dst` on `layer` (default layer if
    /// `None`). Repeated additions between the same pair accumulate on one
    /// edge history.
    pub fn add_edge<P, K, V>(
        &mut self,
        t: Time,
        src: impl Into<NodeId>,
        dst: impl Into<NodeId>,
        props: P,
        layer: Option<&str>,
    ) -> Result<EdgeRef>
    where
        P: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<PropValue>,
    {
        check_time(t)?;
        let (src, dst) = (src.into(), dst.into());
        let props = collect_props(props);
        if let Some(edge) = self.find_edge(&src, &dst) {
            let edge = &self.edges[edge.eid];
            check_types(&props, |name| {
                edge.prop_types.get(&self.edge_keys.get(name)?).copied()
            })?;
        } else {
            check_types(&props, |_| None)?;
        }
        let s = self.ensure_node(src);
        let d = self.ensure_node(dst);
        let layer = self.register_layer(layer.unwrap_or(DEFAULT_LAYER));
        let eid = self.ensure_edge(s, d);
        let at = self.next_event(t);
        let props: Vec<(usize, PropValue)> = props
            .into_iter()
            .map(|(name, value)| (self.edge_keys.intern(&name), value))
            .collect();
        let edge = &mut self.edges[eid];
        for (key, value) in &props {
            edge.prop_types.insert(*key, value.dtype());
        }
        edge.layer_mut(layer).push_addition(Addition { at, props });
        Ok(EdgeRef { eid, src: s, dst: d })
    }

    /// Appends a deletion event. Deleting an edge that was never added is
    /// recorded verbatim; deletion semantics resolve it at view time.
    pub fn delete_edge(
        &mut self,
        t: Time,
        src: impl Into<NodeId>,
        dst: impl Into<NodeId>,
        layer: Option<&str>,
    ) -> Result<EdgeRef> {
        check_time(t)?;
        let s = self.ensure_node(src.into());
        let d = self.ensure_node(dst.into());
        let layer = self.register_layer(layer.unwrap_or(DEFAULT_LAYER));
        let eid = self.ensure_edge(s, d);
        let at = self.next_event(t);
        self.edges[eid].layer_mut(layer).push_deletion(at);
        Ok(EdgeRef { eid, src: s, dst: d })
    }

    /// Applies one update from a log, assigning it a fresh sequence index.
    pub fn apply(&mut self, t: Time, update: &Update) -> Result<()> {
        match update {
            Update::AddNode { node, props } => {
                self.add_node(t, node, props.iter().map(|(k, v)| (k, v.clone())))?;
            }
            Update::NodeProps { node, props } => {
                self.set_node_props(t, node.clone(), props.clone())?;
            }
            Update::AddEdge {
                src,
                dst,
                layer,
                props,
            } => {
                self.add_edge(
                    t,
                    src,
                    dst,
                    props.iter().map(|(k, v)| (k, v.clone())),
                    Some(layer),
                )?;
            }
            Update::DeleteEdge { src, dst, layer } => {
                self.delete_edge(t, src, dst, Some(layer))?;
            }
            Update::GraphProps { props } => {
                self.add_graph_props(t, props.iter().map(|(k, v)| (k, v.clone())))?;
            }
        }
        Ok(())
    }

    pub fn count_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of distinct directed (source, target) edge histories.
    pub fn count_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, id: impl Into<NodeId>) -> Option<NodeRef> {
        let id = id.into();
        let vid = *self.node_index.get(&id)?;
        Some(NodeRef { id, vid })
    }

    pub(crate) fn vid(&self, id: &NodeId) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn node_id(&self, vid: usize) -> &NodeId {
        &self.nodes[vid].id
    }

    pub fn find_edge(&self, src: &NodeId, dst: &NodeId) -> Option<EdgeRef> {
        let s = self.vid(src)?;
        let d = self.vid(dst)?;
        let eid = *self.edge_index.get(&(s, d))?;
        Some(EdgeRef { eid, src: s, dst: d })
    }

    pub fn layer_names(&self) -> &[String] {
        &self.layers
    }

    pub fn layer_id(&self, name: &str) -> Option<usize> {
        self.layer_index.get(name).copied()
    }

    /// Sorted timestamps of every event mentioning the node: its own updates
    /// plus additions and deletions of incident edges on all layers.
    pub fn node_history(&self, id: impl Into<NodeId>) -> Result<Vec<Time>> {
        let id = id.into();
        let vid = self.vid(&id).ok_or(GraphError::NodeNotFound(id))?;
        let node = &self.nodes[vid];
        let mut times: Vec<EventTime> = node
            .activity
            .iter()
            .chain(&node.prop_updates)
            .copied()
            .collect();
        let incident = node
            .out_edges
            .iter()
            .chain(node.in_edges.iter().filter(|&&e| self.edges[e].src != vid));
        for &eid in incident {
            for (_, h) in &self.edges[eid].layers {
                times.extend(h.additions());
                times.extend(h.deletions().iter().copied());
            }
        }
        times.sort_unstable();
        Ok(times.into_iter().map(|t| t.time).collect())
    }

    /// Addition and deletion timestamps of an edge, restricted to one layer or
    /// merged over all layers when `layer` is `None`.
    pub fn edge_history(
        &self,
        src: impl Into<NodeId>,
        dst: impl Into<NodeId>,
        layer: Option<&str>,
    ) -> Result<(Vec<Time>, Vec<Time>)> {
        let (src, dst) = (src.into(), dst.into());
        let edge = self
            .find_edge(&src, &dst)
            .ok_or(GraphError::EdgeNotFound { src, dst })?;
        let layer = match layer {
            Some(name) => Some(
                self.layer_id(name)
                    .ok_or_else(|| GraphError::LayerNotFound(name.to_owned()))?,
            ),
            None => None,
        };
        let mut additions = Vec::new();
        let mut deletions = Vec::new();
        for (l, h) in &self.edges[edge.eid].layers {
            if layer.is_none_or(|want| want == *l) {
                additions.extend(h.additions());
                deletions.extend(h.deletions().iter().copied());
            }
        }
        additions.sort_unstable();
        deletions.sort_unstable();
        Ok((
            additions.into_iter().map(|t| t.time).collect(),
            deletions.into_iter().map(|t| t.time).collect(),
        ))
    }

    #[cfg(test)]
    pub(crate) fn layer_history(&self, eid: usize, layer: usize) -> Option<&LayerHistory> {
        self.edges[eid].layer(layer)
    }

    pub fn earliest_time(&self) -> Result<Time> {
        self.bounds.map(|(lo, _)| lo).ok_or(GraphError::EmptyGraph)
    }

    pub fn latest_time(&self) -> Result<Time> {
        self.bounds.map(|(_, hi)| hi).ok_or(GraphError::EmptyGraph)
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn node_constants(&self, id: impl Into<NodeId>) -> Option<&BTreeMap<String, PropValue>> {
        let vid = self.vid(&id.into())?;
        Some(&self.nodes[vid].constants)
    }

    pub fn graph_constants(&self) -> &BTreeMap<String, PropValue> {
        &self.graph_constants
    }

    /// Latest graph-level property value with `time < before`.
    pub fn graph_property(&self, name: &str, before: Time) -> Option<&PropValue> {
        let key = self.graph_keys.get(name)?;
        self.graph_props.get(&key)?.latest_in(Time::MIN, before)
    }

    /// Number of per-entity history scans performed by view queries so far.
    pub fn history_scans(&self) -> u64 {
        self.scans.0.load(Ordering::Relaxed)
    }

    pub(crate) fn record_scan(&self) {
        self.scans.0.fetch_add(1, Ordering::Relaxed);
    }

    /// Walks the adjacency lists and the edge table and reports the first
    /// inconsistency found.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let mut out_seen = vec![0usize; self.edges.len()];
        let mut in_seen = vec![0usize; self.edges.len()];
        for (vid, node) in self.nodes.iter().enumerate() {
            if self.node_index.get(&node.id) != Some(&vid) {
                return Err(format!("node {} is not indexed at {vid}", node.id));
            }
            for &eid in &node.out_edges {
                if self.edges.get(eid).map(|e| e.src) != Some(vid) {
                    return Err(format!("out-list of {} holds foreign edge {eid}", node.id));
                }
                out_seen[eid] += 1;
            }
            for &eid in &node.in_edges {
                if self.edges.get(eid).map(|e| e.dst) != Some(vid) {
                    return Err(format!("in-list of {} holds foreign edge {eid}", node.id));
                }
                in_seen[eid] += 1;
            }
        }
        for (eid, edge) in self.edges.iter().enumerate() {
            if out_seen[eid] != 1 || in_seen[eid] != 1 {
                return Err(format!("edge {eid} appears {}/{} times in adjacency", out_seen[eid], in_seen[eid]));
            }
            if self.edge_index.get(&(edge.src, edge.dst)) != Some(&eid) {
                return Err(format!("edge {eid} is not indexed by its endpoints"));
            }
            for (_, h) in &edge.layers {
                if !h.additions.windows(2).all(|w| w[0].at < w[1].at)
                    || !h.deletions.windows(2).all(|w| w[0] < w[1])
                {
                    return Err(format!("edge {eid} has an unsorted history"));
                }
            }
        }
        if self.node_index.len() != self.nodes.len() || self.edge_index.len() != self.edges.len() {
            return Err("index sizes disagree with tables".into());
        }
        Ok(())
    }
}
