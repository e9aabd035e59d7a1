//! Build a small multilayer graph by hand and inspect its history.
//!
//! cargo run -p temporal-graph --example build_graph

use std::sync::Arc;

use temporal_graph::{Direction, TemporalGraph, NO_PROPS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = TemporalGraph::new();
    g.add_node(0, "alice", [("team", "infra")])?;
    g.add_node(0, "bob", [("team", "data")])?;
    g.add_edge(1, "alice", "bob", [("weight", 2.5)], Some("email"))?;
    g.add_edge(2, "bob", "carol", NO_PROPS, Some("chat"))?;
    g.add_edge(4, "alice", "carol", [("weight", 1.0)], Some("email"))?;
    g.delete_edge(6, "alice", "bob", Some("email"))?;
    g.add_node(7, "alice", [("team", "platform")])?;

    let g = Arc::new(g);
    println!("{} nodes, {} edges, layers {:?}", g.count_nodes(), g.count_edges(), g.layer_names());
    println!("events span {}..={}", g.earliest_time()?, g.latest_time()?);
    println!("alice was active at {:?}", g.node_history("alice")?);

    let all = g.view();
    println!("alice out-neighbours: {:?}", all.neighbours("alice", Direction::Out)?);
    println!("carol in-degree: {}", all.degree("carol", Direction::In)?);
    for t in [3, 8] {
        let team = g.view().at(t).node_property_latest("alice", "team")?;
        println!("alice's team as of {t}: {team:?}");
    }
    for (t, update) in g.canonical_log() {
        println!("{t:>3}  {update:?}");
    }
    Ok(())
}
