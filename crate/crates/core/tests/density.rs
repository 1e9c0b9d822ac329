mod common;

use asym_ramsey::density::profile;
use asym_ramsey::{
    asym_balancedness, balancedness, build_pair_spec, d2_asym, d_density, default_epsilon, gamma, int, lambda,
    m2_asym, m2_density, m_density, min_lambda, rat, Balance, Error, Graph, PairCase,
};
use common::*;
use proptest::prelude::*;

fn triangle_with_pendant() -> Graph {
    Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
}

#[test]
fn golden_values() {
    assert_eq!(d_density(&Graph::complete(4)), rat(3, 2));
    assert_eq!(m2_density(&Graph::complete(3)).0, int(2));
    assert_eq!(m2_density(&Graph::complete(4)).0, rat(5, 2));
    assert_eq!(m2_density(&Graph::complete(5)).0, int(3));
    assert_eq!(m2_density(&Graph::cycle(4)).0, rat(3, 2));
    assert_eq!(m2_density(&Graph::complete_bipartite(3, 3)).0, int(2));
    assert_eq!(m_density(&triangle_with_pendant()).0, int(1));
    assert_eq!(m2_asym(&Graph::complete(4), &Graph::cycle(4)).0, rat(9, 4));
    assert_eq!(m2_asym(&Graph::cycle(5), &Graph::cycle(6)).0, rat(25, 19));
}

#[test]
fn witnesses_attain_the_maximum() {
    let g = triangle_with_pendant();
    let (m, w) = m_density(&g);
    let sub = g.induced(&w);
    assert_eq!(rat(sub.edge_count() as i64, sub.vertex_count() as i64), m);
    assert!(w.len() >= 3);
    let p = profile(&Graph::complete(4));
    assert_eq!(p.witness_m2.len(), 4);
}

#[test]
fn pair_spec_for_k4_c4() {
    let pair = build_pair_spec(&Graph::complete(4), &Graph::cycle(4), default_epsilon()).unwrap();
    assert_eq!(pair.case, PairCase::Strict);
    assert_eq!(pair.m2_pair, rat(9, 4));
    assert_eq!(pair.gamma, rat(4, 9) - rat(100, 226));
    assert_eq!(pair.gamma, gamma(rat(9, 4), rat(1, 100)));
    assert_eq!(lambda(&Graph::complete(4), &pair), rat(4, 3));
    assert!(pair.hypotheses.all_hold(PairCase::Strict));
}

#[test]
fn pair_spec_rejections() {
    let e = build_pair_spec(&Graph::complete(3), &Graph::complete(2), default_epsilon()).unwrap_err();
    assert!(matches!(e, Error::PairRejected(_)));
    assert!(build_pair_spec(&Graph::cycle(4), &Graph::complete(4), default_epsilon()).is_err());
    assert!(build_pair_spec(&Graph::complete(4), &Graph::cycle(4), int(0)).is_err());
    let eq = build_pair_spec(&Graph::complete(3), &Graph::complete(3), default_epsilon()).unwrap();
    assert_eq!(eq.case, PairCase::Equal);
    assert_eq!(eq.m2_pair, int(2));
}

#[test]
fn edge_against_anything_gives_m2_of_the_other() {
    for h2 in [Graph::complete(3), Graph::complete(5), Graph::cycle(7), Graph::complete_bipartite(2, 3)] {
        assert_eq!(d2_asym(&Graph::complete(2), &h2), m2_density(&h2).0);
    }
}

#[test]
fn balancedness_of_standard_graphs() {
    for g in [Graph::complete(4), Graph::cycle(5), Graph::complete_bipartite(3, 3)] {
        assert!(balancedness(&g, Balance::StrictlyTwoBalanced));
        assert!(balancedness(&g, Balance::TwoBalanced));
        assert!(balancedness(&g, Balance::Balanced));
    }
    let g = triangle_with_pendant();
    assert!(balancedness(&g, Balance::Balanced));
    assert!(!balancedness(&g, Balance::StrictlyBalanced));
    assert!(!balancedness(&g, Balance::TwoBalanced));
    assert!(balancedness(&Graph::complete_bipartite(2, 3), Balance::StrictlyTwoBalanced));
    assert_eq!(m2_density(&Graph::complete_bipartite(2, 3)).0, rat(5, 3));
    assert!(asym_balancedness(&Graph::complete(4), &Graph::cycle(4), true));
    assert!(asym_balancedness(&Graph::cycle(5), &Graph::cycle(6), true));
}

fn dense_graph() -> impl Strategy<Value = Graph> {
    arb_graph(6).prop_filter("m2 above 1", |g| m2_density(g).0 > int(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn m_and_m2_match_subset_enumeration(g in arb_graph(7)) {
        prop_assert_eq!(m_density(&g).0, brute_m(&g));
        prop_assert_eq!(m2_density(&g).0, brute_m2(&g));
    }

    #[test]
    fn m2_pair_matches_subset_enumeration(h1 in arb_graph(7), h2 in prop_oneof![
        Just(Graph::complete(3)), Just(Graph::cycle(4)), Just(Graph::cycle(6)), Just(Graph::complete(4))
    ]) {
        prop_assume!(h1.edge_count() > 0);
        let m2_h2 = m2_density(&h2).0;
        prop_assert_eq!(m2_asym(&h1, &h2).0, brute_m2_pair(&h1, m2_h2));
    }

    #[test]
    fn min_lambda_matches_subset_enumeration(g in arb_graph(8), num in 3i64..12, den in 1i64..5) {
        let m = rat(num, den);
        let (val, verts) = min_lambda(&g, m);
        let (bval, bsize) = brute_min_lambda(&g, m);
        prop_assert_eq!(val, bval);
        prop_assert_eq!(verts.len(), bsize);
    }

    #[test]
    fn sandwich_and_monotonicity(x in dense_graph(), y in dense_graph()) {
        let (mx, my) = (m2_density(&x).0, m2_density(&y).0);
        let (h1, h2, a, b) = if mx >= my { (x, y, mx, my) } else { (y, x, my, mx) };
        let mid = m2_asym(&h1, &h2).0;
        prop_assert!(a >= mid && mid >= b);
        if a > b {
            prop_assert!(a > mid && mid > b);
        }
    }

    #[test]
    fn adding_an_edge_never_lowers_the_densities(g in arb_graph(7), i in 0usize..21) {
        let n = g.vertex_count() as u32;
        prop_assume!(n >= 2);
        let (a, b) = ((i as u32) % n, (i as u32 / n + 1 + i as u32) % n);
        prop_assume!(a != b);
        let h = g.with_edge(asym_ramsey::Edge::new(a, b));
        prop_assert!(m_density(&h).0 >= m_density(&g).0);
        prop_assert!(m2_density(&h).0 >= m2_density(&g).0);
    }
}
