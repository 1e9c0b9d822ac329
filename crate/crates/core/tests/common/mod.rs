//! Brute-force reference implementations shared by the integration tests.
//! Each one is written from the definitions, deliberately without reusing the
//! library's search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use asym_ramsey::{rat, Edge, Graph, Rational, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Graph on `n` vertices from an edge bitmask over the lexicographic pairs.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if mask >> k & 1 == 1 {
                edges.push((a as Vertex, b as Vertex));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        edges.push((a as Vertex, b as Vertex));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                edges.push((a as Vertex, b as Vertex));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edges of `g` with both ends in the vertex mask.
pub fn induced_edges(g: &Graph, mask: u32) -> usize {
    g.edges().iter().filter(|e| mask >> e.0 & 1 == 1 && mask >> e.1 & 1 == 1).count()
}

/// Maximum of `score(v, e)` over non-empty induced subgraphs, as computed by
/// listing every vertex subset. Induced subgraphs suffice for all measures
/// that increase with `e`.
pub fn brute_max(g: &Graph, score: impl Fn(usize, usize) -> Option<Rational>) -> Option<Rational> {
    let n = g.vertex_count();
    assert!(n <= 16);
    let mut best: Option<Rational> = None;
    for mask in 1u32..1 << n {
        let v = mask.count_ones() as usize;
        let e = induced_edges(g, mask);
        if let Some(s) = score(v, e) {
            if best.is_none_or(|b| s > b) {
                best = Some(s);
            }
        }
    }
    best
}

pub fn brute_m(g: &Graph) -> Rational {
    brute_max(g, |v, e| Some(rat(e as i64, v as i64))).unwrap_or(rat(0, 1))
}

/// `m₂` with the conventions `d₂(K2) = 1/2`, and `0` for an edgeless graph.
pub fn brute_m2(g: &Graph) -> Rational {
    if g.edge_count() == 0 {
        return rat(0, 1);
    }
    let best = brute_max(g, |v, e| (v >= 3).then(|| rat(e as i64 - 1, v as i64 - 2)));
    best.map_or(rat(1, 2), |b| b.max(rat(1, 2)))
}

pub fn brute_m2_pair(h1: &Graph, m2_h2: Rational) -> Rational {
    brute_max(h1, |v, e| (v >= 2 && e >= 1).then(|| rat(e as i64, 1) / (rat(v as i64 - 2, 1) + m2_h2.recip())))
        .unwrap()
}

/// Minimum of `v − e/m` over all vertex subsets, the empty set included.
pub fn brute_min_lambda(g: &Graph, m: Rational) -> (Rational, usize) {
    let n = g.vertex_count();
    let mut best = (rat(0, 1), 0);
    for mask in 1u32..1 << n {
        let v = mask.count_ones() as usize;
        let val = rat(v as i64, 1) - rat(induced_edges(g, mask) as i64, 1) / m;
        if val < best.0 || (val == best.0 && v > best.1) {
            best = (val, v);
        }
    }
    best
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Distinct edge sets of copies of `pattern` in `host`, from every injective map.
pub fn brute_copies(host: &Graph, pattern: &Graph) -> BTreeSet<BTreeSet<Edge>> {
    let (n, k) = (host.vertex_count(), pattern.vertex_count());
    let mut out = BTreeSet::new();
    if k > n {
        return out;
    }
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != k {
            continue;
        }
        let verts: Vec<Vertex> = (0..n as Vertex).filter(|v| mask >> v & 1 == 1).collect();
        for p in permutations(k) {
            let img = |x: Vertex| verts[p[x as usize]];
            if pattern.edges().iter().all(|e| host.has_edge(img(e.0), img(e.1))) {
                out.insert(pattern.edges().iter().map(|e| Edge::new(img(e.0), img(e.1))).collect());
            }
        }
    }
    out
}

pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    permutations(a.vertex_count())
        .into_iter()
        .any(|p| a.edges().iter().all(|e| b.has_edge(p[e.0 as usize] as Vertex, p[e.1 as usize] as Vertex)))
}

fn connected_without(g: &Graph, removed: Option<Vertex>) -> bool {
    let keep: Vec<Vertex> = g.vertices().filter(|&v| Some(v) != removed).collect();
    let Some(&start) = keep.first() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if Some(y) != removed && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == keep.len()
}

/// At least three vertices, connected, and still connected after deleting any one vertex.
pub fn brute_two_connected(g: &Graph) -> bool {
    g.vertex_count() >= 3 && connected_without(g, None) && g.vertices().all(|v| connected_without(g, Some(v)))
}

/// Every red/blue colouring of the edges, searched exhaustively.
pub fn brute_has_valid_colouring(g: &Graph, h1: &Graph, h2: &Graph) -> bool {
    let idx = |e: &Edge| g.edges().iter().position(|f| f == e).unwrap();
    let masks = |pat: &Graph| -> Vec<u64> {
        brute_copies(g, pat).into_iter().map(|c| c.iter().fold(0u64, |m, e| m | 1 << idx(e))).collect()
    };
    let reds = masks(h1);
    let blues = masks(h2);
    let m = g.edge_count();
    assert!(m <= 20);
    (0u64..1 << m).any(|red| reds.iter().all(|c| c & red != *c) && blues.iter().all(|c| c & !red != *c))
}

/// Whether the edges of `host` passing `keep` contain a copy of `pattern`,
/// by plain backtracking over injective maps of the pattern's vertices.
pub fn has_copy(host: &Graph, keep: &dyn Fn(Edge) -> bool, pattern: &Graph) -> bool {
    fn extend(host: &Graph, keep: &dyn Fn(Edge) -> bool, pattern: &Graph, map: &mut Vec<Vertex>) -> bool {
        let k = map.len();
        if k == pattern.vertex_count() {
            return true;
        }
        for x in host.vertices() {
            if map.contains(&x) {
                continue;
            }
            let fits = (0..k).all(|i| {
                !pattern.has_edge(i as Vertex, k as Vertex) || (host.has_edge(map[i], x) && keep(Edge::new(map[i], x)))
            });
            if fits {
                map.push(x);
                if extend(host, keep, pattern, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    extend(host, keep, pattern, &mut Vec::new())
}

/// Proper subgraphs all have smaller `(e − 1)/(v − 2)`, with `K2` counted as `1/2`.
pub fn brute_strictly_two_balanced(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n < 3 {
        // a lone edge has no denser part; isolated vertices never pass
        return n == 2 && g.edge_count() == 1;
    }
    let top = rat(g.edge_count() as i64 - 1, n as i64 - 2);
    let full = (1u32 << n) - 1;
    rat(1, 2) < top
        && (1u32..full).all(|mask| {
            let v = mask.count_ones() as i64;
            v < 3 || rat(induced_edges(g, mask) as i64 - 1, v - 2) < top
        })
}

/// Proper subgraphs of `h1` all have smaller `e/(v − 2 + 1/m)`.
pub fn brute_strictly_asym_balanced(h1: &Graph, m: Rational) -> bool {
    let n = h1.vertex_count();
    let d = |v: i64, e: usize| rat(e as i64, 1) / (rat(v - 2, 1) + m.recip());
    let top = d(n as i64, h1.edge_count());
    let full = (1u32 << n) - 1;
    (1u32..full).all(|mask| {
        let v = mask.count_ones() as i64;
        v < 2 || d(v, induced_edges(h1, mask)) < top
    })
}
