use std::collections::BTreeMap;

use super::{alive_intervals, DeletionSemantics, GraphView};
use crate::store::{EventTime, PropValue, TemporalGraph, Update};
use crate::Time;

impl GraphView {
    /// Copies the events visible through this view into a standalone graph.
    ///
    /// Querying the copy without constraints, under the same deletion
    /// semantics, answers like the view. Under persistent semantics an edge
    /// already alive at the window start gets an addition at the start, and a
    /// node keeps the last pre-window value of each property as a property-only
    /// update.
    pub fn materialise(&self) -> TemporalGraph {
        let g = &*self.graph;
        let w = self.window;
        let persistent = self.semantics == DeletionSemantics::Persistent;
        let mut log: Vec<(EventTime, Update)> = Vec::new();
        let mut constants = Vec::new();

        for vid in self.node_vids() {
            let node = &g.nodes[vid];
            let props_at = |at: EventTime| -> Vec<(String, PropValue)> {
                let mut props: Vec<_> = node
                    .props
                    .iter()
                    .filter_map(|(&key, h)| {
                        let i = h.entries().binary_search_by_key(&at, |(t, _)| *t).ok()?;
                        Some((g.node_keys.name(key).to_owned(), h.entries()[i].1.clone()))
                    })
                    .collect();
                props.sort_by(|a, b| a.0.cmp(&b.0));
                props
            };
            for &at in node.activity.iter().filter(|at| w.contains(at.time)) {
                log.push((
                    at,
                    Update::AddNode {
                        node: node.id.clone(),
                        props: props_at(at),
                    },
                ));
            }
            for &at in node.prop_updates.iter().filter(|at| w.contains(at.time)) {
                log.push((
                    at,
                    Update::NodeProps {
                        node: node.id.clone(),
                        props: props_at(at),
                    },
                ));
            }
            if persistent && w.start() != Time::MIN {
                let mut carried: BTreeMap<EventTime, Vec<(String, PropValue)>> = BTreeMap::new();
                for (&key, h) in &node.props {
                    let before = h.entries().partition_point(|(t, _)| t.time < w.start());
                    if let Some((at, value)) = before.checked_sub(1).map(|i| &h.entries()[i]) {
                        carried
                            .entry(*at)
                            .or_default()
                            .push((g.node_keys.name(key).to_owned(), value.clone()));
                    }
                }
                for (at, mut props) in carried {
                    props.sort_by(|a, b| a.0.cmp(&b.0));
                    log.push((
                        at,
                        Update::NodeProps {
                            node: node.id.clone(),
                            props,
                        },
                    ));
                }
            }
            for (name, value) in &node.constants {
                constants.push((node.id.clone(), name.clone(), value.clone()));
            }
        }

        for e in self.edge_refs() {
            let edge = &g.edges[e.eid];
            let src = &g.nodes[edge.src].id;
            let dst = &g.nodes[edge.dst].id;
            for (layer, h) in &edge.layers {
                if !self.layer_selected(*layer) || !self.layer_visible(h) {
                    continue;
                }
                let layer = &g.layer_names()[*layer];
                for a in h.additions_in(w.start(), w.end()) {
                    let mut props: Vec<_> = a
                        .props
                        .iter()
                        .map(|(k, v)| (g.edge_keys.name(*k).to_owned(), v.clone()))
                        .collect();
                    props.sort_by(|a, b| a.0.cmp(&b.0));
                    log.push((
                        a.at,
                        Update::AddEdge {
                            src: src.clone(),
                            dst: dst.clone(),
                            layer: layer.clone(),
                            props,
                        },
                    ));
                }
                let deletion = |at: EventTime| {
                    (
                        at,
                        Update::DeleteEdge {
                            src: src.clone(),
                            dst: dst.clone(),
                            layer: layer.clone(),
                        },
                    )
                };
                if !persistent {
                    log.extend(
                        h.deletions()
                            .iter()
                            .filter(|d| w.contains(d.time))
                            .map(|&d| deletion(d)),
                    );
                    continue;
                }
                for iv in alive_intervals(h).iter().filter(|iv| iv.overlaps(&w)) {
                    let opened_inside = iv.opened_by.is_some_and(|a| a.time >= w.start());
                    if !opened_inside && w.start() != Time::MIN {
                        let seq = iv.opened_by.map_or(0, |a| a.seq);
                        log.push((
                            EventTime {
                                time: w.start(),
                                seq,
                            },
                            Update::AddEdge {
                                src: src.clone(),
                                dst: dst.clone(),
                                layer: layer.clone(),
                                props: Vec::new(),
                            },
                        ));
                    }
                    if let Some(d) = iv.closed_by.filter(|d| d.time < w.end()) {
                        log.push(deletion(d));
                    }
                }
            }
        }

        for &at in g.graph_updates.iter() {
            let keep = if persistent {
                at.time < w.end()
            } else {
                w.contains(at.time)
            };
            if keep {
                let mut props: Vec<_> = g
                    .graph_props
                    .iter()
                    .filter_map(|(&key, h)| {
                        let i = h.entries().binary_search_by_key(&at, |(t, _)| *t).ok()?;
                        Some((g.graph_keys.name(key).to_owned(), h.entries()[i].1.clone()))
                    })
                    .collect();
                props.sort_by(|a, b| a.0.cmp(&b.0));
                log.push((at, Update::GraphProps { props }));
            }
        }

        log.sort_by_key(|(at, _)| *at);
        let mut out = TemporalGraph::new();
        for (at, update) in &log {
            out.apply(at.time, update)
                .expect("events copied from a consistent graph");
        }
        for (id, name, value) in constants {
            out.add_node_constant(id, &name, value)
                .expect("constants copied once per node");
        }
        for (name, value) in g.graph_constants() {
            out.add_graph_constant(name, value.clone())
                .expect("constants copied once");
        }
        out
    }
}
