//! Load an edge table, report bad rows, and export views and results.
//!
//! cargo run -p temporal-graph --example export

use std::io::stdout;
use std::sync::Arc;

use temporal_graph::algorithms::degree_stats;
use temporal_graph::io::{
    export, load_edges_from_reader, read_graph_json, write_graph_json, EdgeTableSpec, ExportFormat, TimeFormat,
};
use temporal_graph::{PropType, TemporalGraph};

const TABLE: &str = "\
from,to,at,amount
alice,bob,2024-01-01T00:00:00Z,12.5
bob,carol,2024-01-01T00:00:30Z,3
carol,alice,not-a-time,1
alice,carol,2024-01-01T00:01:00Z,7.25
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = EdgeTableSpec::new("", "from", "to", "at")
        .time_format(TimeFormat::Rfc3339)
        .property("amount", PropType::Float);
    let mut g = TemporalGraph::new();
    let report = load_edges_from_reader(&mut g, TABLE.as_bytes(), &spec)?;
    eprintln!("{} of {} rows loaded", report.valid_rows, report.total_rows);
    for e in &report.errors {
        eprintln!("  line {}: {}", e.row, e.message);
    }

    let mut doc = Vec::new();
    write_graph_json(&g, &mut doc)?;
    assert!(read_graph_json(doc.as_slice())?.event_eq(&g));

    let g = Arc::new(g);
    let view = g.view();
    println!("-- edge list");
    export(&view, ExportFormat::EdgeListCsv, &mut stdout())?;
    println!("-- degree");
    export(&degree_stats(&view)?, ExportFormat::ResultCsv, &mut stdout())?;
    println!("-- degree as json");
    export(&degree_stats(&view)?, ExportFormat::ResultJson, &mut stdout())?;
    Ok(())
}
