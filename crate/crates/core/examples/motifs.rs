//! Count 3-edge delta-temporal motifs on the bundled interaction log.
//!
//! cargo run -p temporal-graph --example motifs

use std::path::Path;
use std::sync::Arc;

use temporal_graph::algorithms::{temporal_motifs, COLUMN_KEYS, ROW_KEYS};
use temporal_graph::io::open_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/interactions.csv");
    let (g, _) = open_graph(&path)?;
    let g = Arc::new(g);
    let hour = 3600;
    let m = temporal_motifs(&g.view(), hour)?;

    print!("{:<8}", "");
    for c in COLUMN_KEYS {
        print!("{c:>7}");
    }
    println!();
    for (r, row) in ROW_KEYS.iter().zip(m.counts) {
        print!("{r:<8}");
        for n in row {
            print!("{n:>7}");
        }
        println!();
    }
    println!("{} motifs completing within {hour}s", m.total());
    Ok(())
}
