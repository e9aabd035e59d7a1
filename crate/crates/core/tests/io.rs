use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use temporal_graph::io::{
    load_edges, load_edges_from_reader, read_graph_json, write_edge_list_csv, write_graph_json, EdgeTableSpec,
    IoError,
};
use temporal_graph::TemporalGraph;
use temporal_graph_testkit::{generate, rng, sprinkle_node_events, GenConfig};

fn random_graph(seed: u64, deletions: bool) -> TemporalGraph {
    let mut r = rng(seed);
    let mut config = GenConfig::random(&mut r, 80);
    if !deletions {
        config.deletion_rate = 0.0;
    }
    let mut g = generate(&mut r, &config).graph;
    if deletions {
        sprinkle_node_events(&mut r, &mut g, 6, config.max_time);
        if r.gen_bool(0.5) {
            g.add_graph_constant("name", "random").unwrap();
        }
    }
    g
}

fn json_bytes(g: &TemporalGraph) -> Vec<u8> {
    let mut out = Vec::new();
    write_graph_json(g, &mut out).unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graph_json_round_trips(seed in any::<u64>()) {
        let g = random_graph(seed, true);
        let bytes = json_bytes(&g);
        let back = read_graph_json(bytes.as_slice()).unwrap();
        prop_assert!(back.event_eq(&g));
        prop_assert_eq!(json_bytes(&back), bytes);
    }

    #[test]
    fn edge_list_round_trips(seed in any::<u64>()) {
        let g = Arc::new(random_graph(seed, false));
        prop_assume!(!g.is_empty());
        let mut csv = Vec::new();
        write_edge_list_csv(&g.view(), &mut csv).unwrap();
        let mut back = TemporalGraph::new();
        let report = load_edges_from_reader(&mut back, csv.as_slice(), &EdgeTableSpec::edge_list("")).unwrap();
        prop_assert_eq!(report.valid_rows, g.view().addition_events().len());
        prop_assert!(back.event_eq(&g));
        let mut again = Vec::new();
        write_edge_list_csv(&Arc::new(back).view(), &mut again).unwrap();
        prop_assert_eq!(again, csv);
    }

    #[test]
    fn every_row_is_accounted_for(rows in proptest::collection::vec((0u8..4, 0u8..4, prop_oneof!["[0-9]{1,3}", "x"]), 1..40)) {
        let mut text = String::from("src,dst,time\n");
        for (s, d, t) in &rows {
            text.push_str(&format!("{s},{d},{t}\n"));
        }
        let bad = rows.iter().filter(|r| r.2 == "x").count();
        let mut g = TemporalGraph::new();
        match load_edges_from_reader(&mut g, text.as_bytes(), &EdgeTableSpec::new("", "src", "dst", "time")) {
            Ok(report) => {
                prop_assert_eq!(report.total_rows, rows.len());
                prop_assert_eq!(report.valid_rows + report.errors.len(), report.total_rows);
                prop_assert_eq!(report.errors.len(), bad);
                prop_assert_eq!(Arc::new(g).view().addition_events().len(), rows.len() - bad);
            }
            Err(IoError::NoValidRows { report }) => prop_assert_eq!(report.errors.len(), rows.len()),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }
}

#[test]
fn bundled_sample_loads() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/emails.csv");
    let (g, report) = load_edges(&EdgeTableSpec::new(path, "src", "dst", "time")).unwrap();
    assert_eq!(report.errors.len(), 0);
    assert_eq!((g.count_nodes(), g.count_edges()), (3, 3));
}

#[test]
fn file_round_trip_through_disk() {
    let g = random_graph(5, true);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    write_graph_json(&g, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_graph_json(std::fs::File::open(&path).unwrap()).unwrap();
    assert!(back.event_eq(&g));
}
