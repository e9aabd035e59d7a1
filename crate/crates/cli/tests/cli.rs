use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use temporal_graph::algorithms::{degree_stats, temporal_motifs, PageRankConfig};
use temporal_graph::io::{open_graph, read_graph_json, write_result_csv};
use temporal_graph_testkit::{brute_force_motifs, view_additions};

fn tgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgraph"))
        .args(args)
        .env_remove("TG_LOG")
        .output()
        .expect("spawn tgraph")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn load_writes_a_graph_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = tgraph(&["load", data("emails.csv").to_str().unwrap(), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("loaded 3 edges, 0 errors"));
    assert!(o.stdout.is_empty());
    let g = read_graph_json(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!((g.count_nodes(), g.count_edges()), (3, 3));
}

#[test]
fn bad_rows_are_counted_and_all_bad_fails() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = dir.path().join("mixed.csv");
    fs::write(&mixed, "src,dst,time\na,b,1\na,c,oops\nb,c,2\n").unwrap();
    let o = tgraph(&["load", mixed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("loaded 2 edges, 1 error"), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"format_version\": 1"));

    let strict = tgraph(&["load", mixed.to_str().unwrap(), "--strict"]);
    assert_eq!(strict.status.code(), Some(2));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "src,dst,time\na,b,x\n").unwrap();
    assert_eq!(tgraph(&["load", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tgraph(&["load", "/no/such/file.csv"]).status.code(), Some(2));
    let missing = tgraph(&["stats", "--graph", "/no/such/graph.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn flag_errors_exit_with_one() {
    let g = data("emails.csv");
    let g = g.to_str().unwrap();
    let o = tgraph(&["run", "--graph", g, "--algorithm", "degree", "--window", "5:2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("start must precede end"));
    let both = tgraph(&["run", "--graph", g, "--algorithm", "degree", "--window", "0:5", "--rolling", "2"]);
    assert_eq!(both.status.code(), Some(1));
    let no_delta = tgraph(&["run", "--graph", g, "--algorithm", "motifs"]);
    assert_eq!(no_delta.status.code(), Some(1));
    let no_layer = tgraph(&["run", "--graph", g, "--algorithm", "degree", "--layers", "nope"]);
    assert_eq!(no_layer.status.code(), Some(1));
    assert_eq!(tgraph(&["run", "--graph", g]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_tgraph"))
        .args(["stats", "--graph", g])
        .env("TG_LOG", "shouting")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(tgraph(&["--help"]).status.code(), Some(0));
}

#[test]
fn algorithm_errors_exit_with_three() {
    let g = data("emails.csv");
    let o = tgraph(&["run", "--graph", g.to_str().unwrap(), "--algorithm", "reachability", "--seeds", "zed"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("zed"));
}

#[test]
fn stats_reports_counts_and_bounds() {
    let o = tgraph(&["stats", "--graph", data("emails.csv").to_str().unwrap()]);
    assert_eq!(stdout(&o), "nodes,edges,earliest_time,latest_time,layers\n3,3,1,3,_default\n");

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    let g = temporal_graph::TemporalGraph::new();
    temporal_graph::io::write_graph_json(&g, fs::File::create(&empty).unwrap()).unwrap();
    let o = tgraph(&["stats", "--graph", empty.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["nodes"], 0);
    assert_eq!(v["edges"], 0);
    assert!(v["earliest_time"].is_null());
    assert!(stderr(&o).contains("no events"));
}

#[test]
fn degree_output_matches_the_library() {
    let path = data("interactions.csv");
    let (g, _) = open_graph(&path).unwrap();
    let g = std::sync::Arc::new(g);
    let view = g.view().window(1_230_768_000, 1_231_768_000).unwrap();
    let mut expected = Vec::new();
    write_result_csv(&degree_stats(&view).unwrap(), &mut expected).unwrap();
    let o = tgraph(&[
        "run",
        "--graph",
        path.to_str().unwrap(),
        "--algorithm",
        "degree",
        "--window",
        "1230768000:1231768000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(o.stdout, expected);
}

#[test]
fn motif_totals_match_brute_force() {
    let path = data("interactions.csv");
    let (g, _) = open_graph(&path).unwrap();
    let g = std::sync::Arc::new(g);
    let oracle = brute_force_motifs(&view_additions(&g.view()), 3600);
    let matrix = temporal_motifs(&g.view(), 3600).unwrap();
    assert_eq!(matrix.counts, oracle);

    let o = tgraph(&["run", "--graph", path.to_str().unwrap(), "--algorithm", "motifs", "--delta", "3600"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("motif,ab,ac,ba,bc,ca,cb"));
    let total: u64 = lines
        .flat_map(|l| l.split(',').skip(1).map(|c| c.parse::<u64>().unwrap()).collect::<Vec<_>>())
        .sum();
    assert_eq!(total, oracle.iter().flatten().sum::<u64>());
}

#[test]
fn rolling_motifs_use_the_long_format() {
    let path = data("interactions.csv");
    let o = tgraph(&[
        "run",
        "--graph",
        path.to_str().unwrap(),
        "--algorithm",
        "motifs",
        "--delta",
        "3600",
        "--rolling",
        "604800",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("window_start,window_end,motif,ab,ac,ba,bc,ca,cb\n"));
    assert_eq!((text.lines().count() - 1) % 6, 0);
}

#[test]
fn top_k_then_rolling_selection() {
    let path = data("transactions.csv");
    let g = path.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let top = dir.path().join("top.csv");
    let o = tgraph(&["run", "--graph", g, "--algorithm", "pagerank", "--top-k", "5", "--output", top.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&top).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    let scores: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]));

    let o = tgraph(&[
        "run",
        "--graph",
        g,
        "--algorithm",
        "pagerank",
        "--rolling",
        "2592000",
        "--select",
        "top.csv",
    ]);
    // relative path that does not exist is read as a literal id list
    assert_eq!(stdout(&o).lines().count(), 1);

    let o = tgraph(&[
        "run",
        "--graph",
        g,
        "--algorithm",
        "pagerank",
        "--rolling",
        "2592000",
        "--select",
        top.to_str().unwrap(),
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("node,"));
    let selected: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    let mut expected: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    expected.sort();
    let mut got = selected.clone();
    got.sort();
    assert_eq!(got, expected);
}

#[test]
fn json_pagerank_is_a_distribution() {
    let o = tgraph(&[
        "run",
        "--graph",
        data("transactions.csv").to_str().unwrap(),
        "--algorithm",
        "pagerank",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let sum: f64 = v["rows"].as_array().unwrap().iter().map(|r| r["score"].as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9);
    assert_eq!(v["metadata"]["damping"], PageRankConfig::default().damping);
}
