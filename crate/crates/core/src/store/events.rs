use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EventTime, NodeId, PropHistory, PropValue, TemporalGraph, Time};
use crate::Result;

/// One change to the graph, without its position in the log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Update {
    AddNode {
        node: NodeId,
        props: Vec<(String, PropValue)>,
    },
    /// Property update that does not count as node activity.
    NodeProps {
        node: NodeId,
        props: Vec<(String, PropValue)>,
    },
    AddEdge {
        src: NodeId,
        dst: NodeId,
        layer: String,
        props: Vec<(String, PropValue)>,
    },
    DeleteEdge {
        src: NodeId,
        dst: NodeId,
        layer: String,
    },
    GraphProps {
        props: Vec<(String, PropValue)>,
    },
}

/// An update at its position in the chronological log.
#[derive(Clone, Debug, PartialEq)]
pub struct UpdateEvent {
    pub at: EventTime,
    pub update: Update,
}

fn props_at(
    histories: &std::collections::HashMap<usize, PropHistory>,
    names: &super::Interner,
    at: EventTime,
) -> Vec<(String, PropValue)> {
    let mut props: Vec<(String, PropValue)> = histories
        .iter()
        .filter_map(|(&key, h)| {
            let i = h.entries().binary_search_by_key(&at, |(t, _)| *t).ok()?;
            Some((names.name(key).to_owned(), h.entries()[i].1.clone()))
        })
        .collect();
    props.sort_by(|a, b| a.0.cmp(&b.0));
    props
}

impl TemporalGraph {
    /// The full chronological log, ordered by (timestamp, sequence index).
    /// Property lists inside each update are sorted by name.
    pub fn events(&self) -> Vec<UpdateEvent> {
        let mut log = Vec::new();
        for node in &self.nodes {
            for &at in &node.activity {
                log.push(UpdateEvent {
                    at,
                    update: Update::AddNode {
                        node: node.id.clone(),
                        props: props_at(&node.props, &self.node_keys, at),
                    },
                });
            }
            for &at in &node.prop_updates {
                log.push(UpdateEvent {
                    at,
                    update: Update::NodeProps {
                        node: node.id.clone(),
                        props: props_at(&node.props, &self.node_keys, at),
                    },
                });
            }
        }
        for edge in &self.edges {
            let src = &self.nodes[edge.src].id;
            let dst = &self.nodes[edge.dst].id;
            for (layer, h) in &edge.layers {
                let layer = &self.layer_names()[*layer];
                for a in &h.additions {
                    let mut props: Vec<(String, PropValue)> = a
                        .props
                        .iter()
                        .map(|(k, v)| (self.edge_keys.name(*k).to_owned(), v.clone()))
                        .collect();
                    props.sort_by(|a, b| a.0.cmp(&b.0));
                    log.push(UpdateEvent {
                        at: a.at,
                        update: Update::AddEdge {
                            src: src.clone(),
                            dst: dst.clone(),
                            layer: layer.clone(),
                            props,
                        },
                    });
                }
                for &at in &h.deletions {
                    log.push(UpdateEvent {
                        at,
                        update: Update::DeleteEdge {
                            src: src.clone(),
                            dst: dst.clone(),
                            layer: layer.clone(),
                        },
                    });
                }
            }
        }
        for &at in &self.graph_updates {
            log.push(UpdateEvent {
                at,
                update: Update::GraphProps {
                    props: props_at(&self.graph_props, &self.graph_keys, at),
                },
            });
        }
        log.sort_by_key(|e| e.at);
        log
    }

    /// The log with sequence indices dropped: two graphs are event-equal when
    /// their canonical logs and constant properties agree.
    pub fn canonical_log(&self) -> Vec<(Time, Update)> {
        self.events()
            .into_iter()
            .map(|e| (e.at.time, e.update))
            .collect()
    }

    /// Constant node properties keyed by external id, for nodes that have any.
    pub fn all_node_constants(&self) -> BTreeMap<NodeId, BTreeMap<String, PropValue>> {
        self.nodes
            .iter()
            .filter(|n| !n.constants.is_empty())
            .map(|n| (n.id.clone(), n.constants.clone()))
            .collect()
    }

    pub fn event_eq(&self, other: &TemporalGraph) -> bool {
        self.canonical_log() == other.canonical_log()
            && self.all_node_constants() == other.all_node_constants()
            && self.graph_constants == other.graph_constants
    }

    /// Builds a graph by applying updates in the given order.
    pub fn from_updates<'a>(updates: impl IntoIterator<Item = (Time, &'a Update)>) -> Result<Self> {
        let mut g = TemporalGraph::new();
        for (t, u) in updates {
            g.apply(t, u)?;
        }
        Ok(g)
    }
}
