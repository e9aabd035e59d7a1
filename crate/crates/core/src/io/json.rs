use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::store::{NodeId, PropValue, TemporalGraph, Time, Update};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct Event {
    time: Time,
    #[serde(flatten)]
    update: Update,
}

#[derive(Serialize, Deserialize)]
struct Document {
    format_version: u64,
    layers: Vec<String>,
    #[serde(default)]
    graph_constants: BTreeMap<String, PropValue>,
    #[serde(default)]
    node_constants: BTreeMap<NodeId, BTreeMap<String, PropValue>>,
    events: Vec<Event>,
}

#[derive(Deserialize)]
struct VersionProbe {
    format_version: u64,
}

/// Writes the lossless graph document: every event in log order plus all
/// constant properties. Output is byte-identical for event-equal graphs with
/// the same layer registration order.
pub fn write_graph_json<W: Write>(graph: &TemporalGraph, mut out: W) -> Result<(), IoError> {
    let doc = Document {
        format_version: FORMAT_VERSION,
        layers: graph.layer_names().to_vec(),
        graph_constants: graph.graph_constants().clone(),
        node_constants: graph.all_node_constants(),
        events: graph
            .canonical_log()
            .into_iter()
            .map(|(time, update)| Event { time, update })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_graph_json<R: Read>(mut input: R) -> Result<TemporalGraph, IoError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let probe: VersionProbe = serde_json::from_str(&text)?;
    if probe.format_version != FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion(probe.format_version));
    }
    let doc: Document = serde_json::from_str(&text)?;
    let mut graph = TemporalGraph::new();
    for layer in &doc.layers {
        graph.register_layer(layer);
    }
    for (name, value) in doc.graph_constants {
        graph.add_graph_constant(&name, value)?;
    }
    for event in &doc.events {
        graph.apply(event.time, &event.update)?;
    }
    for (node, constants) in doc.node_constants {
        for (name, value) in constants {
            graph.add_node_constant(node.clone(), &name, value)?;
        }
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NO_PROPS;

    fn sample() -> TemporalGraph {
        let mut g = TemporalGraph::new();
        g.add_edge(3, "a", 7u64, [("w", 0.1)], Some("mail")).unwrap();
        g.add_edge(3, 7u64, "a", NO_PROPS, None).unwrap();
        g.delete_edge(4, "a", 7u64, Some("mail")).unwrap();
        g.add_node(1, "a", [("name", "alice")]).unwrap();
        g.add_graph_props(0, [("version", 2)]).unwrap();
        g.add_graph_constant("source", "test").unwrap();
        g.add_node_constant("a", "kind", true).unwrap();
        g.add_node_constant("lonely", "kind", false).unwrap();
        g
    }

    fn to_bytes(g: &TemporalGraph) -> Vec<u8> {
        let mut buf = Vec::new();
        write_graph_json(g, &mut buf).unwrap();
        buf
    }

    #[test]
    fn round_trip_is_lossless_and_byte_stable() {
        let g = sample();
        let bytes = to_bytes(&g);
        let back = read_graph_json(bytes.as_slice()).unwrap();
        assert!(back.event_eq(&g));
        assert_eq!(back.count_nodes(), g.count_nodes());
        assert_eq!(back.layer_names(), g.layer_names());
        assert_eq!(to_bytes(&back), bytes);
    }

    #[test]
    fn numeric_node_constants_keep_their_ids() {
        let mut g = TemporalGraph::new();
        g.add_edge(1, 7u64, "x", NO_PROPS, None).unwrap();
        g.add_node_constant(7u64, "kind", "hub").unwrap();
        let back = read_graph_json(to_bytes(&g).as_slice()).unwrap();
        assert!(back.event_eq(&g));
        assert_eq!(back.count_nodes(), 2);
    }

    #[test]
    fn empty_graph() {
        let g = TemporalGraph::new();
        let back = read_graph_json(to_bytes(&g).as_slice()).unwrap();
        assert!(back.is_empty());
        assert!(back.event_eq(&g));
    }

    #[test]
    fn rejects_unknown_version() {
        let doc = r#"{"format_version": 9, "layers": [], "events": []}"#;
        assert!(matches!(
            read_graph_json(doc.as_bytes()),
            Err(IoError::UnsupportedVersion(9))
        ));
    }
}
