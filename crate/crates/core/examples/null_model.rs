//! Compare motif counts against a timestamp-shuffled null model.
//!
//! cargo run -p temporal-graph --example null_model

use std::path::Path;
use std::sync::Arc;

use temporal_graph::algorithms::{shuffle_timestamps, temporal_motifs};
use temporal_graph::io::open_graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/interactions.csv");
    let (g, _) = open_graph(&path)?;
    let delta = 3600;
    let observed = temporal_motifs(&Arc::new(g.clone()).view(), delta)?.total();

    let samples: Vec<u64> = (0..20)
        .map(|seed| {
            let shuffled = Arc::new(shuffle_timestamps(&g, seed));
            temporal_motifs(&shuffled.view(), delta).map(|m| m.total())
        })
        .collect::<Result<_, _>>()?;
    let mean = samples.iter().sum::<u64>() as f64 / samples.len() as f64;
    let var = samples.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
    println!("observed motifs: {observed}");
    println!("shuffled mean:   {mean:.1} (sd {:.1}, n={})", var.sqrt(), samples.len());
    println!("z-score:         {:.2}", (observed as f64 - mean) / var.sqrt().max(f64::EPSILON));
    Ok(())
}
