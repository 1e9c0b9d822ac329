//! Canonical labelling by colour refinement plus individualisation.
//!
//! Every leaf of the search tree yields an ordering of the vertices; the
//! canonical form is the relabelled graph whose adjacency bitstring is
//! smallest. Subtrees rooted at twin vertices are skipped because swapping
//! twins is an automorphism that fixes everything individualised so far.

use std::collections::BTreeSet;

use crate::graph::{Edge, Graph, Vertex};

type Partition = Vec<Vec<Vertex>>;

fn refine(g: &Graph, mut cells: Partition) -> Partition {
    let n = g.vertex_count();
    let mut cell_of = vec![0usize; n];
    loop {
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v as usize] = i;
            }
        }
        let k = cells.len();
        let mut next: Partition = Vec::with_capacity(k);
        let mut changed = false;
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, Vertex)> = cell
                .iter()
                .map(|&v| {
                    let mut counts = vec![0u32; k];
                    for &w in g.neighbors(v) {
                        counts[cell_of[w as usize]] += 1;
                    }
                    (counts, v)
                })
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
            if next.last().map(|c| c.len()) != Some(cell.len()) {
                changed = true;
            }
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}

fn are_twins(g: &Graph, a: Vertex, b: Vertex) -> bool {
    let words = g.words();
    let (ra, rb) = (g.row(a), g.row(b));
    (0..words).all(|w| {
        let mut x = ra[w];
        let mut y = rb[w];
        if b as usize / 64 == w {
            x &= !(1u64 << (b % 64));
        }
        if a as usize / 64 == w {
            y &= !(1u64 << (a % 64));
        }
        x == y
    })
}

fn certificate(g: &Graph, order: &[Vertex]) -> Vec<u64> {
    let n = g.vertex_count();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let total = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; total.div_ceil(64)];
    for &Edge(a, b) in g.edges() {
        let (i, j) = {
            let (x, y) = (pos[a as usize], pos[b as usize]);
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        };
        // Column-major upper triangle, matching the graph6 bit order.
        let idx = j * (j - 1) / 2 + i;
        bits[idx / 64] |= 1u64 << (63 - idx % 64);
    }
    bits
}

struct Best {
    cert: Option<Vec<u64>>,
    order: Vec<Vertex>,
}

fn search(g: &Graph, cells: Partition, best: &mut Best) {
    let target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i);
    let Some(t) = target else {
        let order: Vec<Vertex> = cells.iter().map(|c| c[0]).collect();
        let cert = certificate(g, &order);
        if best.cert.as_ref().is_none_or(|b| cert < *b) {
            best.cert = Some(cert);
            best.order = order;
        }
        return;
    };
    let mut tried: Vec<Vertex> = Vec::new();
    for &v in &cells[t] {
        if tried.iter().any(|&u| are_twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let mut split = cells.clone();
        let rest: Vec<Vertex> = split[t].iter().copied().filter(|&x| x != v).collect();
        split[t] = vec![v];
        split.insert(t + 1, rest);
        search(g, refine(g, split), best);
    }
}

/// Canonical relabelling of `g`.
///
/// Returns the canonical graph and `map` with `map[v]` the canonical label of
/// vertex `v`. Isomorphic inputs give equal canonical graphs.
pub fn canonical_form(g: &Graph) -> (Graph, Vec<Vertex>) {
    let n = g.vertex_count();
    if n == 0 {
        return (g.clone(), Vec::new());
    }
    // Start from the degree partition so that refinement has something to work with.
    let mut by_degree: Vec<(usize, Vertex)> = g.vertices().map(|v| (g.degree(v), v)).collect();
    by_degree.sort();
    let mut cells: Partition = Vec::new();
    for (d, v) in by_degree {
        match cells.last_mut() {
            Some(c) if g.degree(c[0]) == d => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = Best { cert: None, order: Vec::new() };
    search(g, refine(g, cells), &mut best);
    let mut map = vec![0; n];
    for (i, &v) in best.order.iter().enumerate() {
        map[v as usize] = i as Vertex;
    }
    (g.permuted(&map), map)
}

/// A hashable key identifying the isomorphism class of `g`.
pub fn canonical_key(g: &Graph) -> Graph {
    canonical_form(g).0
}

/// All graphs on `n` vertices up to isomorphism, in canonical form.
///
/// Built by adding one vertex at a time, joined to every possible subset of
/// the earlier vertices, and keeping one graph per canonical form.
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    let mut level: BTreeSet<Graph> = BTreeSet::from([Graph::empty(0)]);
    for k in 0..n {
        let mut next = BTreeSet::new();
        for g in &level {
            for mask in 0u64..(1u64 << k) {
                let mut edges: BTreeSet<Edge> = g.edges().iter().copied().collect();
                edges.extend((0..k as Vertex).filter(|&x| mask >> x & 1 == 1).map(|x| Edge::new(x, k as Vertex)));
                next.insert(canonical_key(&Graph::from_edge_set(k + 1, &edges)));
            }
        }
        level = next;
    }
    level.into_iter().collect()
}
