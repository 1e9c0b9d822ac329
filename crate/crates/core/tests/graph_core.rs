mod common;

use asym_ramsey::blocks::cut_vertices;
use asym_ramsey::canon::canonical_key;
use asym_ramsey::embed::are_isomorphic;
use asym_ramsey::graph6::{emit_edge_list, parse_edge_list};
use asym_ramsey::{
    block_decomposition, canonical_form, emit_graph6, enumerate_copies, graph_union, is_two_connected,
    nonisomorphic_graphs, parse_graph, parse_graph6, Edge, Error, Graph,
};
use common::*;
use proptest::prelude::*;

#[test]
fn copy_counts_on_small_hosts() {
    assert_eq!(enumerate_copies(&Graph::complete(4), &Graph::complete(3)).len(), 4);
    assert_eq!(enumerate_copies(&Graph::cycle(4), &Graph::complete(3)).len(), 0);
    assert_eq!(enumerate_copies(&Graph::complete(4), &Graph::cycle(4)).len(), 3);
    assert_eq!(enumerate_copies(&Graph::complete(5), &Graph::cycle(5)).len(), 12);
    assert_eq!(enumerate_copies(&Graph::complete_bipartite(3, 3), &Graph::cycle(4)).len(), 9);
}

#[test]
fn graph6_round_trips_and_known_strings() {
    assert_eq!(parse_graph6("C~").unwrap().edge_count(), 6);
    assert!(are_isomorphic(&parse_graph6("C~").unwrap(), &Graph::complete(4)));
    assert_eq!(emit_graph6(&Graph::complete(2)), "A_");
    assert_eq!(emit_graph6(&Graph::empty(0)), "?");
    assert!(matches!(parse_graph6(""), Err(Error::Graph6 { .. })));
    assert!(parse_graph6("C~~").is_err());
    let g = parse_graph("0 1\n1 2\n2 0\n").unwrap();
    assert_eq!(g.edge_count(), 3);
    assert!(matches!(parse_edge_list("0 1\n1 x\n"), Err(Error::EdgeList { line: 2, .. })));
}

#[test]
fn blocks_of_two_triangles_sharing_a_vertex() {
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
    let blocks = block_decomposition(&g);
    assert_eq!(blocks.len(), 2);
    assert!(blocks.iter().all(|b| b.edges.len() == 3));
    assert_eq!(cut_vertices(&g), vec![2]);
    assert!(!is_two_connected(&g));
    assert!(is_two_connected(&Graph::cycle(5)));
    assert!(!is_two_connected(&Graph::path(4)));
    assert!(!is_two_connected(&Graph::complete(2)));
}

#[test]
fn union_of_overlapping_copies() {
    let a = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let b = Graph::from_edges(4, [(0, 1), (1, 3), (0, 3)]).unwrap();
    let u = graph_union(&a, &b);
    assert_eq!(u.edge_count(), 5);
    assert!(u.has_edge(1, 3) && u.has_edge(1, 2));
}

#[test]
fn isomorphism_classes_match_brute_force_on_five_vertices() {
    let classes = nonisomorphic_graphs(5);
    assert_eq!(classes.len(), 34);
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            assert!(!brute_isomorphic(&classes[i], &classes[j]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn copy_enumeration_matches_brute_force(host in arb_graph(6), pat in prop_oneof![
        Just(Graph::complete(3)), Just(Graph::cycle(4)), Just(Graph::path(3)), Just(Graph::complete(4))
    ]) {
        let fast: std::collections::BTreeSet<_> =
            enumerate_copies(&host, &pat).iter().map(|o| o.edges.iter().copied().collect()).collect();
        prop_assert_eq!(fast, brute_copies(&host, &pat));
    }

    #[test]
    fn two_connectivity_matches_vertex_deletion(g in arb_graph(8)) {
        prop_assert_eq!(is_two_connected(&g), brute_two_connected(&g));
    }

    #[test]
    fn blocks_partition_the_edges(g in arb_graph(8)) {
        let mut seen: Vec<Edge> = block_decomposition(&g).into_iter().flat_map(|b| b.edges).collect();
        seen.sort();
        prop_assert_eq!(seen, g.edges().to_vec());
    }

    #[test]
    fn canonical_form_is_invariant_under_relabelling(g in arb_graph(7), seed in any::<u64>()) {
        let n = g.vertex_count();
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut r = rng(seed);
        use rand::seq::SliceRandom;
        perm.shuffle(&mut r);
        let h = g.permuted(&perm);
        prop_assert_eq!(canonical_key(&g), canonical_key(&h));
        let (c, labels) = canonical_form(&g);
        prop_assert_eq!(c.edge_count(), g.edge_count());
        prop_assert_eq!(labels.len(), n);
    }

    #[test]
    fn canonical_keys_separate_non_isomorphic_graphs(a in arb_graph(6), b in arb_graph(6)) {
        prop_assert_eq!(canonical_key(&a) == canonical_key(&b), brute_isomorphic(&a, &b));
    }

    #[test]
    fn graph6_and_edge_lists_round_trip(g in arb_graph(12)) {
        prop_assert_eq!(parse_graph6(&emit_graph6(&g)).unwrap(), g.clone());
        let back = parse_edge_list(&emit_edge_list(&g)).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}
