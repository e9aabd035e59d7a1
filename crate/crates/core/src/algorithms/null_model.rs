use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::store::{TemporalGraph, Update};

/// Timestamp-shuffled null model.
///
/// The timestamps of all edge-addition events are permuted uniformly at random
/// across events; node updates, deletions, layers, properties and the static
/// edge set are left unchanged. The same seed always yields the same graph.
pub fn shuffle_timestamps(graph: &TemporalGraph, seed: u64) -> TemporalGraph {
    let mut log = graph.events();
    let slots: Vec<usize> = log
        .iter()
        .enumerate()
        .filter(|(_, e)| matches!(e.update, Update::AddEdge { .. }))
        .map(|(i, _)| i)
        .collect();
    let mut times: Vec<i64> = slots.iter().map(|&i| log[i].at.time).collect();
    times.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    for (&i, t) in slots.iter().zip(times) {
        log[i].at.time = t;
    }
    // ties keep their original log order
    log.sort_by_key(|e| e.at);

    let mut out = TemporalGraph::new();
    for e in &log {
        out.apply(e.at.time, &e.update)
            .expect("replaying a consistent log");
    }
    for (id, constants) in graph.all_node_constants() {
        for (name, value) in constants {
            out.add_node_constant(id.clone(), &name, value)
                .expect("constants copied once per node");
        }
    }
    for (name, value) in graph.graph_constants() {
        out.add_graph_constant(name, value.clone())
            .expect("constants copied once");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NO_PROPS;

    fn sample() -> TemporalGraph {
        let mut g = TemporalGraph::new();
        for t in 0..20 {
            g.add_edge(t, (t % 5) as u64, ((t * 3 + 1) % 7) as u64, [("w", t)], None).unwrap();
        }
        g.delete_edge(30, 0u64, 1u64, None).unwrap();
        g
    }

    #[test]
    fn seeded_and_structure_preserving() {
        let g = sample();
        let a = shuffle_timestamps(&g, 7);
        let b = shuffle_timestamps(&g, 7);
        let c = shuffle_timestamps(&g, 8);
        assert!(a.event_eq(&b));
        assert!(!a.event_eq(&c));
        assert_eq!(a.count_edges(), g.count_edges());
        assert_eq!(a.count_nodes(), g.count_nodes());
        assert_eq!(a.edge_history(0u64, 1u64, None).unwrap().1, vec![30]);
    }

    #[test]
    fn no_additions_is_identity() {
        let mut g = TemporalGraph::new();
        g.add_node(1, "a", NO_PROPS).unwrap();
        assert!(shuffle_timestamps(&g, 1).event_eq(&g));
    }
}
