//! Follow time-respecting paths out of a seed account.
//!
//! cargo run -p temporal-graph --example reachability

use std::path::Path;
use std::sync::Arc;

use temporal_graph::algorithms::temporal_reachability;
use temporal_graph::io::open_graph;
use temporal_graph::NodeId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/transactions.csv");
    let (g, _) = open_graph(&path)?;
    let g = Arc::new(g);
    let view = g.view();
    let seed = NodeId::from("acct00");
    let start = view.earliest_time()?;

    for hops in [Some(1), Some(2), None] {
        let r = temporal_reachability(&view, std::slice::from_ref(&seed), start, hops)?;
        let label = hops.map_or("unbounded".to_owned(), |h| format!("{h} hop(s)"));
        println!("{label}: {} accounts reachable", r.reached.len());
    }
    let r = temporal_reachability(&view, &[seed], start, None)?;
    let mut earliest: Vec<_> = r.reached.iter().collect();
    earliest.sort_by_key(|(_, t)| **t);
    for (node, t) in earliest.into_iter().take(8) {
        println!("  {node:<8} first reached at {t}");
    }
    Ok(())
}
