use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use temporal_graph::{DeletionSemantics, NodeId, TemporalGraph, Time, Window};
use temporal_graph_testkit::{
    generate, oracle_edges, random_view, rng, sprinkle_node_events, summarise, summarise_materialised,
    GenConfig,
};

fn edge_set(view: &temporal_graph::GraphView) -> BTreeSet<(NodeId, NodeId)> {
    view.edge_list().into_iter().collect()
}

fn random_graph(seed: u64, max_events: usize) -> (Arc<TemporalGraph>, Vec<temporal_graph_testkit::RawEvent>, Time) {
    let mut r = rng(seed);
    let config = GenConfig::random(&mut r, max_events);
    let mut generated = generate(&mut r, &config);
    sprinkle_node_events(&mut r, &mut generated.graph, 5, config.max_time);
    (Arc::new(generated.graph), generated.events, config.max_time)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn views_agree_with_their_materialisation(seed in any::<u64>()) {
        let (g, _, max_time) = random_graph(seed, 60);
        let mut r = rng(seed ^ 0x5eed);
        let (view, stack) = random_view(&mut r, &g, max_time);
        prop_assert_eq!(summarise(&view), summarise_materialised(&view), "stack {}", stack);
    }

    #[test]
    fn materialise_is_idempotent(seed in any::<u64>()) {
        let (g, _, max_time) = random_graph(seed, 60);
        let mut r = rng(seed ^ 1);
        let (view, _) = random_view(&mut r, &g, max_time);
        let once = Arc::new(view.materialise());
        let twice = once.view().with_semantics(view.semantics()).materialise();
        prop_assert!(once.event_eq(&twice));
    }

    #[test]
    fn window_composition_is_intersection(seed in any::<u64>(), a in -5i64..60, la in 1i64..60, b in -5i64..60, lb in 1i64..60) {
        let (g, _, _) = random_graph(seed, 50);
        let nested = g.view().window(a, a + la).unwrap().window(b, b + lb).unwrap();
        let direct = g.view().window_of(&Window::new(a, a + la).unwrap().intersect(&Window::new(b, b + lb).unwrap()));
        prop_assert_eq!(summarise(&nested), summarise(&direct));
    }

    #[test]
    fn constraints_commute(seed in any::<u64>(), a in 0i64..40, len in 1i64..40) {
        let (g, _, _) = random_graph(seed, 50);
        let layers: Vec<String> = g.layer_names().iter().take(2).cloned().collect();
        let ids: Vec<NodeId> = (0..g.count_nodes()).step_by(2).map(|v| g.node_id(v).clone()).collect();
        let one = g.view().window(a, a + len).unwrap().layers(&layers).unwrap().subgraph(ids.clone());
        let two = g.view().subgraph(ids.clone()).layers(&layers).unwrap().window(a, a + len).unwrap();
        let three = g.view().layers(&layers).unwrap().subgraph(ids).window(a, a + len).unwrap();
        prop_assert_eq!(summarise(&one), summarise(&two));
        prop_assert_eq!(summarise(&one), summarise(&three));
    }

    #[test]
    fn narrower_windows_see_less(seed in any::<u64>(), a in 0i64..50, len in 1i64..50, shrink in 0i64..20) {
        let (g, _, _) = random_graph(seed, 50);
        for semantics in [DeletionSemantics::Event, DeletionSemantics::Persistent] {
            let wide = g.view().with_semantics(semantics).window(a, a + len + shrink).unwrap();
            let narrow = wide.window(a, a + len).unwrap();
            prop_assert!(edge_set(&narrow).is_subset(&edge_set(&wide)));
            let nodes: BTreeSet<_> = narrow.node_ids().into_iter().collect();
            prop_assert!(nodes.is_subset(&wide.node_ids().into_iter().collect()));
        }
    }

    #[test]
    fn persistent_sees_at_least_what_event_sees(seed in any::<u64>(), a in -5i64..200, len in 1i64..200) {
        let (g, _, _) = random_graph(seed, 60);
        let event = g.view().window(a, a + len).unwrap();
        let persistent = event.with_semantics(DeletionSemantics::Persistent);
        prop_assert!(edge_set(&event).is_subset(&edge_set(&persistent)));
    }

    #[test]
    fn edge_presence_matches_the_interval_oracle(seed in any::<u64>(), a in -5i64..200, len in 1i64..200) {
        let (g, events, _) = random_graph(seed, 60);
        let mut r = rng(seed ^ 7);
        let layers: Option<Vec<String>> = r.gen_bool(0.5).then(|| {
            g.layer_names().iter().filter(|_| r.gen_bool(0.5)).cloned().collect()
        });
        for semantics in [DeletionSemantics::Event, DeletionSemantics::Persistent] {
            let mut view = g.view().with_semantics(semantics).window(a, a + len).unwrap();
            if let Some(ls) = &layers {
                view = view.layers(ls).unwrap();
            }
            let expected = oracle_edges(&events, a, a + len, layers.as_deref(), semantics);
            prop_assert_eq!(edge_set(&view), expected, "{}", semantics);
        }
    }

    #[test]
    fn rolling_windows_tile_the_timeline(seed in any::<u64>(), size in 1i64..40) {
        let (g, events, _) = random_graph(seed, 60);
        prop_assume!(!events.is_empty());
        let windows = g.view().rolling(size, None).unwrap();
        for e in &events {
            let hits = windows.iter().filter(|w| w.contains(e.time)).count();
            prop_assert_eq!(hits, 1);
        }
        let total: usize = g.view().views(&windows).map(|v| v.addition_events().len()).sum();
        prop_assert_eq!(total, g.view().addition_events().len());
    }
}

#[test]
fn building_views_does_not_scan_histories() {
    let (g, _, max_time) = random_graph(11, 200);
    let mut r = rng(3);
    for _ in 0..100 {
        let before = g.history_scans();
        let (view, stack) = random_view(&mut r, &g, max_time);
        assert_eq!(g.history_scans(), before, "constructing {stack} scanned histories");
        let _ = view.count_edges();
    }
    assert!(g.history_scans() > 0);
}
