use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use temporal_graph::algorithms::{
    degree_stats, pagerank, run_over_windows, shuffle_timestamps, temporal_motifs,
    temporal_reachability, Algorithm, PageRankConfig,
};
use temporal_graph::{NodeId, TemporalGraph, Time, Update, NO_PROPS};
use temporal_graph_testkit::{
    brute_force_motifs, brute_force_reachability, dense_pagerank, generate, random_view, rng,
    view_additions, GenConfig,
};

fn motif_graph(seed: u64, max_events: usize) -> (Arc<TemporalGraph>, Time) {
    let mut r = rng(seed);
    let mut config = GenConfig::random(&mut r, max_events);
    config.nodes = r.gen_range(2..=8);
    let g = generate(&mut r, &config).graph;
    (Arc::new(g), config.max_time)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn motifs_match_brute_force(seed in any::<u64>(), delta in 1i64..80) {
        let (g, max_time) = motif_graph(seed, 120);
        let (view, _) = random_view(&mut rng(seed ^ 2), &g, max_time);
        let counts = temporal_motifs(&view, delta).unwrap();
        prop_assert_eq!(counts.counts, brute_force_motifs(&view_additions(&view), delta));
    }

    #[test]
    fn motifs_ignore_node_labels(seed in any::<u64>(), delta in 1i64..80) {
        let (g, _) = motif_graph(seed, 100);
        let relabel = |id: &NodeId| NodeId::Str(format!("x{}", 1000 - id.to_string().len() as u64 * 7 - id.to_string().bytes().map(u64::from).sum::<u64>()));
        let mut renamed = TemporalGraph::new();
        for (t, u) in g.canonical_log() {
            let u = match u {
                Update::AddEdge { src, dst, layer, props } => Update::AddEdge { src: relabel(&src), dst: relabel(&dst), layer, props },
                Update::DeleteEdge { src, dst, layer } => Update::DeleteEdge { src: relabel(&src), dst: relabel(&dst), layer },
                other => other,
            };
            renamed.apply(t, &u).unwrap();
        }
        let a = temporal_motifs(&g.view(), delta).unwrap();
        let b = temporal_motifs(&Arc::new(renamed).view(), delta).unwrap();
        prop_assert_eq!(a.total(), b.total());
    }

    #[test]
    fn motif_counts_grow_with_delta(seed in any::<u64>(), d1 in 1i64..60, extra in 0i64..60) {
        let (g, _) = motif_graph(seed, 100);
        let small = temporal_motifs(&g.view(), d1).unwrap();
        let large = temporal_motifs(&g.view(), d1 + extra).unwrap();
        prop_assert!(small.le_cellwise(&large));
    }

    #[test]
    fn reachability_matches_brute_force(seed in any::<u64>(), hops in proptest::option::of(1usize..5)) {
        let (g, max_time) = motif_graph(seed, 100);
        prop_assume!(g.count_nodes() > 0);
        let mut r = rng(seed ^ 3);
        let (view, _) = random_view(&mut r, &g, max_time);
        let nodes = view.node_ids();
        prop_assume!(!nodes.is_empty());
        let seeds: Vec<NodeId> = nodes.iter().filter(|_| r.gen_bool(0.3)).cloned().chain([nodes[0].clone()]).collect::<BTreeSet<_>>().into_iter().collect();
        let start = r.gen_range(-5..=max_time);
        let got = temporal_reachability(&view, &seeds, start, hops).unwrap();
        prop_assert_eq!(got.reached, brute_force_reachability(&view_additions(&view), &seeds, start, hops));
    }

    #[test]
    fn later_starts_reach_less(seed in any::<u64>(), s1 in 0i64..50, later in 0i64..50) {
        let (g, _) = motif_graph(seed, 80);
        prop_assume!(g.count_nodes() > 0);
        let seed_node = g.node_id(0).clone();
        let early = temporal_reachability(&g.view(), std::slice::from_ref(&seed_node), s1, None).unwrap();
        let late = temporal_reachability(&g.view(), &[seed_node], s1 + later, None).unwrap();
        for (node, t) in &late.reached {
            prop_assert!(early.reached.contains_key(node));
            prop_assert!(*t >= s1 + later);
        }
    }

    #[test]
    fn pagerank_is_a_distribution(seed in any::<u64>()) {
        let (g, max_time) = motif_graph(seed, 100);
        let (view, _) = random_view(&mut rng(seed ^ 4), &g, max_time);
        prop_assume!(view.count_nodes() > 0);
        let config = PageRankConfig { tolerance: 1e-12, max_iterations: 1000, ..Default::default() };
        let result = pagerank(&view, &config).unwrap();
        let scores: Vec<f64> = result.rows.iter().map(|r| r.values[0].as_f64().unwrap()).collect();
        prop_assert!((scores.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(scores.iter().all(|s| *s >= 0.0));
        let oracle = dense_pagerank(&view.node_ids(), &view.edge_list(), 0.85);
        for row in &result.rows {
            prop_assert!((row.values[0].as_f64().unwrap() - oracle[&row.node]).abs() < 1e-9);
        }
    }

    #[test]
    fn windowed_results_match_materialised_windows(seed in any::<u64>(), size in 5i64..60) {
        let (g, _) = motif_graph(seed, 80);
        prop_assume!(!g.is_empty());
        let view = g.view();
        let windows = view.rolling(size, None).unwrap();
        let config = PageRankConfig::default();
        let table = run_over_windows(&view, &windows, &Algorithm::PageRank(config));
        for (i, w) in windows.iter().enumerate() {
            let copy = Arc::new(view.window_of(w).materialise());
            match pagerank(&copy.view(), &config) {
                Ok(expected) => {
                    for row in &expected.rows {
                        let got = table.value(row.node.clone(), i).and_then(|v| v.as_f64()).unwrap();
                        prop_assert!((got - row.values[0].as_f64().unwrap()).abs() < 1e-12);
                    }
                    let present = table.rows.iter().filter(|(_, cells)| cells[i].is_some()).count();
                    prop_assert_eq!(present, expected.rows.len());
                }
                Err(_) => prop_assert!(table.errors[i].is_some()),
            }
        }
    }

    #[test]
    fn null_model_keeps_static_structure(seed in any::<u64>(), shuffle_seed in any::<u64>()) {
        let mut r = rng(seed);
        let config = GenConfig::random(&mut r, 80);
        let g = generate(&mut r, &config).graph;
        let shuffled = shuffle_timestamps(&g, shuffle_seed);
        let times = |g: &TemporalGraph| {
            let mut ts: Vec<Time> = g.canonical_log().iter().filter(|(_, u)| matches!(u, Update::AddEdge { .. })).map(|(t, _)| *t).collect();
            ts.sort();
            ts
        };
        prop_assert_eq!(times(&g), times(&shuffled));
        let a = Arc::new(g);
        let b = Arc::new(shuffled.clone());
        let static_edges = |g: &Arc<TemporalGraph>| g.view().edge_list().into_iter().collect::<BTreeSet<_>>();
        prop_assert_eq!(static_edges(&a), static_edges(&b));
        if a.count_nodes() > 0 {
            prop_assert_eq!(degree_stats(&a.view()).unwrap().rows, degree_stats(&b.view()).unwrap().rows);
        }
        prop_assert!(shuffle_timestamps(&a, shuffle_seed).event_eq(&shuffled));
    }
}

#[test]
fn shuffles_with_different_seeds_differ() {
    let mut g = TemporalGraph::new();
    for t in 0..12 {
        g.add_edge(t, t as u64 % 4, (t as u64 + 1) % 4, NO_PROPS, None).unwrap();
    }
    let a = shuffle_timestamps(&g, 1);
    let b = shuffle_timestamps(&g, 2);
    assert!(!a.event_eq(&b));
}

#[test]
fn pagerank_symmetric_cases_are_exact() {
    let config = PageRankConfig { tolerance: 1e-15, max_iterations: 1000, ..Default::default() };
    let mut cycle = TemporalGraph::new();
    for (t, (s, d)) in [("a", "b"), ("b", "c"), ("c", "a")].into_iter().enumerate() {
        cycle.add_edge(t as i64, s, d, NO_PROPS, None).unwrap();
    }
    let r = pagerank(&Arc::new(cycle).view(), &config).unwrap();
    for row in &r.rows {
        assert!((row.values[0].as_f64().unwrap() - 1.0 / 3.0).abs() <= 1e-12);
    }
    let mut pair = TemporalGraph::new();
    pair.add_edge(1, "a", "b", NO_PROPS, None).unwrap();
    pair.add_edge(2, "b", "a", NO_PROPS, None).unwrap();
    let r = pagerank(&Arc::new(pair).view(), &config).unwrap();
    for row in &r.rows {
        assert!((row.values[0].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    }
}

#[test]
fn pagerank_star_matches_dense_oracle() {
    let mut star = TemporalGraph::new();
    for (t, leaf) in ["x", "y", "z"].into_iter().enumerate() {
        star.add_edge(t as i64, leaf, "h", NO_PROPS, None).unwrap();
    }
    let g = Arc::new(star);
    let config = PageRankConfig { tolerance: 1e-15, max_iterations: 1000, ..Default::default() };
    let result = pagerank(&g.view(), &config).unwrap();
    let oracle = dense_pagerank(&g.view().node_ids(), &g.view().edge_list(), 0.85);
    let got: BTreeMap<NodeId, f64> = result.rows.iter().map(|r| (r.node.clone(), r.values[0].as_f64().unwrap())).collect();
    for (node, score) in oracle {
        assert!((got[&node] - score).abs() <= 1e-9);
    }
}

#[test]
fn motif_layout_matches_golden_file() {
    let mut text = String::from("row,col,signature\n");
    for s in temporal_graph::algorithms::motif_signatures() {
        text.push_str(&format!("{},{},{}\n", s.row, s.col, s.signature));
    }
    assert_eq!(text, include_str!("golden/motif_layout.txt"));
}
