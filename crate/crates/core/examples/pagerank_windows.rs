//! PageRank of the top accounts over monthly sliding windows, from the bundled
//! transaction network.
//!
//! cargo run -p temporal-graph --example pagerank_windows

use std::path::Path;
use std::sync::Arc;

use temporal_graph::algorithms::{pagerank, run_over_windows, Algorithm, PageRankConfig};
use temporal_graph::io::open_graph;

const MONTH: i64 = 30 * 24 * 3600;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/transactions.csv");
    let (g, _) = open_graph(&path)?;
    let g = Arc::new(g);
    let view = g.view();
    let config = PageRankConfig::default();

    let overall = pagerank(&view, &config)?;
    let top: Vec<_> = overall.top_k(5)?.into_iter().map(|(node, _)| node).collect();
    println!("top 5 overall: {top:?}");

    let windows = view.rolling(MONTH, None)?;
    let table = run_over_windows(&view, &windows, &Algorithm::PageRank(config));
    print!("{:<10}", "window");
    for node in &top {
        print!("{:>10}", node.to_string());
    }
    println!();
    for (i, w) in windows.iter().enumerate() {
        print!("{:<10}", i + 1);
        for node in &top {
            match table.value(node.clone(), i).and_then(|v| v.as_f64()) {
                Some(score) => print!("{score:>10.4}"),
                None => print!("{:>10}", "-"),
            }
        }
        println!("   {w}");
    }
    Ok(())
}
