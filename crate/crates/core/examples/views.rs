//! Stack window, layer, subgraph and deletion-semantics constraints.
//!
//! cargo run -p temporal-graph --example views

use std::sync::Arc;

use temporal_graph::{DeletionSemantics, TemporalGraph, NO_PROPS};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut g = TemporalGraph::new();
    g.add_edge(1, "a", "b", NO_PROPS, Some("email"))?;
    g.add_edge(2, "b", "c", NO_PROPS, Some("phone"))?;
    g.add_edge(3, "c", "a", NO_PROPS, Some("email"))?;
    g.add_edge(8, "a", "c", NO_PROPS, Some("phone"))?;
    g.delete_edge(5, "a", "b", Some("email"))?;
    let g = Arc::new(g);

    let scans = g.history_scans();
    let early = g.view().window(0, 4)?;
    let email = early.layers(["email"])?;
    let pair = email.subgraph(["a", "b"]);
    assert_eq!(g.history_scans(), scans, "building views is free");

    println!("window [0,4): {:?}", early.edge_list());
    println!("  + email layer: {:?}", email.edge_list());
    println!("  + subgraph a,b: {:?}", pair.edge_list());

    // a->b is added at 1 and deleted at 5
    let mid = g.view().window(2, 4)?;
    println!("[2,4) event semantics sees a->b: {}", mid.has_edge("a", "b"));
    let persistent = mid.with_semantics(DeletionSemantics::Persistent);
    println!("[2,4) persistent semantics sees a->b: {}", persistent.has_edge("a", "b"));
    let later = g.view().with_semantics(DeletionSemantics::Persistent).at(6);
    println!("persistent snapshot at 6 sees a->b: {}", later.has_edge("a", "b"));

    for w in g.view().rolling(3, None)?.iter() {
        println!("rolling {w}: {} edges", g.view().window_of(w).count_edges());
    }

    let copy = email.materialise();
    println!("materialised email view: {} events", copy.canonical_log().len());
    Ok(())
}
