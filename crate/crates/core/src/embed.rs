//! Subgraph copies of a pattern inside a host, found by backtracking.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::graph::{Edge, Graph, Subgraph, Vertex};

/// One copy of a pattern: a subgraph of the host identified by its edge set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Occurrence {
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
}

impl Occurrence {
    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Size of the edge intersection with `other`.
    pub fn common_edges(&self, other: &Occurrence) -> usize {
        sorted_intersection_len(&self.edges, &other.edges)
    }

    pub fn common_vertices(&self, other: &Occurrence) -> usize {
        sorted_intersection_len(&self.vertices, &other.vertices)
    }

    /// True when the edge sets meet in exactly `{e}`.
    pub fn meets_only_at(&self, other: &Occurrence, e: Edge) -> bool {
        self.contains_edge(e) && other.contains_edge(e) && self.common_edges(other) == 1
    }

    pub fn to_subgraph(&self) -> Subgraph {
        Subgraph::from_parts(self.vertices.iter().copied(), self.edges.iter().copied())
    }

    /// The copy as a standalone graph on its own vertices.
    pub fn to_graph(&self) -> Graph {
        self.to_subgraph().to_graph().0
    }
}

fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

/// An injective homomorphism of the pattern into the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertex_map: Vec<Vertex>,
    pub edge_image: Vec<Edge>,
}

/// All copies of one pattern, deduplicated by edge image and sorted by it.
#[derive(Clone, Debug)]
pub struct CopySet {
    pub pattern: Graph,
    pub copies: Vec<Occurrence>,
}

impl CopySet {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Occurrence> {
        self.copies.iter()
    }

    /// Indices of the copies through each edge.
    pub fn edge_index(&self) -> BTreeMap<Edge, Vec<usize>> {
        let mut map: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.copies.iter().enumerate() {
            for &e in &c.edges {
                map.entry(e).or_default().push(i);
            }
        }
        map
    }
}

struct Search<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    order: Vec<Vertex>,
    // For each position in `order`, the earlier positions adjacent to it.
    back: Vec<Vec<usize>>,
    map: Vec<Vertex>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(host: &'a Graph, pattern: &'a Graph, seeds: &[Vertex]) -> Search<'a> {
        let k = pattern.vertex_count();
        let mut placed = vec![false; k];
        let mut order: Vec<Vertex> = Vec::with_capacity(k);
        for &s in seeds {
            placed[s as usize] = true;
            order.push(s);
        }
        while order.len() < k {
            let next = (0..k as Vertex)
                .filter(|&v| !placed[v as usize])
                .max_by_key(|&v| {
                    let back = pattern.neighbors(v).iter().filter(|&&w| placed[w as usize]).count();
                    (back, pattern.degree(v), std::cmp::Reverse(v))
                })
                .expect("unplaced vertex exists");
            placed[next as usize] = true;
            order.push(next);
        }
        let mut pos = vec![0usize; k];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let mut b: Vec<usize> =
                    pattern.neighbors(v).iter().map(|&w| pos[w as usize]).filter(|&p| p < i).collect();
                b.sort_unstable();
                b
            })
            .collect();
        Search {
            host,
            pattern,
            order,
            back,
            map: Vec::with_capacity(k),
            used: vec![false; host.vertex_count()],
        }
    }

    fn fits(&self, depth: usize, c: Vertex) -> bool {
        if self.used[c as usize] {
            return false;
        }
        let pv = self.order[depth];
        if self.host.degree(c) < self.pattern.degree(pv) {
            return false;
        }
        self.back[depth].iter().all(|&p| self.host.has_edge(c, self.map[p]))
    }

    /// Returns true once `visit` asks to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[Vertex], &[Vertex]) -> bool) -> bool {
        let depth = self.map.len();
        if depth == self.order.len() {
            return visit(&self.order, &self.map);
        }
        let candidates: Vec<Vertex> = match self.back[depth].first() {
            Some(&p) => self.host.neighbors(self.map[p]).to_vec(),
            None => self.host.vertices().collect(),
        };
        for c in candidates {
            if self.fits(depth, c) {
                self.used[c as usize] = true;
                self.map.push(c);
                let stop = self.run(visit);
                self.map.pop();
                self.used[c as usize] = false;
                if stop {
                    return true;
                }
            }
        }
        false
    }

    fn run_seeded(&mut self, fixed: &[Vertex], visit: &mut dyn FnMut(&[Vertex], &[Vertex]) -> bool) {
        for (depth, &c) in fixed.iter().enumerate() {
            if !self.fits(depth, c) {
                for &u in &self.map {
                    self.used[u as usize] = false;
                }
                self.map.clear();
                return;
            }
            self.used[c as usize] = true;
            self.map.push(c);
        }
        self.run(visit);
        for &u in &self.map {
            self.used[u as usize] = false;
        }
        self.map.clear();
    }
}

fn image(pattern: &Graph, order: &[Vertex], map: &[Vertex]) -> Embedding {
    let mut vertex_map = vec![0; pattern.vertex_count()];
    for (i, &pv) in order.iter().enumerate() {
        vertex_map[pv as usize] = map[i];
    }
    let mut edge_image: Vec<Edge> = pattern.edges().iter().map(|e| e.map(|x| vertex_map[x as usize])).collect();
    edge_image.sort_unstable();
    Embedding { vertex_map, edge_image }
}

/// Every injective embedding of `pattern` into `host` (automorphic images included).
pub fn embeddings(host: &Graph, pattern: &Graph) -> Vec<Embedding> {
    let mut out = Vec::new();
    if pattern.vertex_count() > host.vertex_count() {
        return out;
    }
    let mut s = Search::new(host, pattern, &[]);
    s.run(&mut |order, map| {
        out.push(image(pattern, order, map));
        false
    });
    out
}

fn collect(found: HashSet<(Vec<Edge>, Vec<Vertex>)>, pattern: &Graph) -> CopySet {
    let mut copies: Vec<Occurrence> = found
        .into_iter()
        .map(|(edges, vertices)| Occurrence { edges, vertices })
        .collect();
    copies.sort();
    copies.dedup_by(|a, b| a.edges == b.edges);
    CopySet { pattern: pattern.clone(), copies }
}

fn record(found: &mut HashSet<(Vec<Edge>, Vec<Vertex>)>, seen: &mut HashSet<Vec<Edge>>, emb: Embedding) {
    if seen.insert(emb.edge_image.clone()) {
        let mut verts = emb.vertex_map;
        verts.sort_unstable();
        found.insert((emb.edge_image, verts));
    }
}

/// All subgraphs of `host` isomorphic to `pattern`, as a deterministic [`CopySet`].
pub fn enumerate_copies(host: &Graph, pattern: &Graph) -> CopySet {
    let mut found = HashSet::new();
    let mut seen = HashSet::new();
    if pattern.vertex_count() <= host.vertex_count() && pattern.edge_count() > 0 {
        let mut s = Search::new(host, pattern, &[]);
        s.run(&mut |order, map| {
            record(&mut found, &mut seen, image(pattern, order, map));
            false
        });
    }
    collect(found, pattern)
}

/// The copies of `pattern` in `host` whose edge set contains `e`.
pub fn copies_through(host: &Graph, pattern: &Graph, e: Edge) -> CopySet {
    let mut found = HashSet::new();
    let mut seen = HashSet::new();
    if host.contains_edge(e) && pattern.vertex_count() <= host.vertex_count() {
        for &pe in pattern.edges() {
            let mut s = Search::new(host, pattern, &[pe.0, pe.1]);
            for fixed in [[e.0, e.1], [e.1, e.0]] {
                s.run_seeded(&fixed, &mut |order, map| {
                    record(&mut found, &mut seen, image(pattern, order, map));
                    false
                });
            }
        }
    }
    collect(found, pattern)
}

/// True when `pattern` is isomorphic to some subgraph of `host`.
pub fn contains_copy(host: &Graph, pattern: &Graph) -> bool {
    if pattern.vertex_count() > host.vertex_count() || pattern.edge_count() > host.edge_count() {
        return false;
    }
    let mut s = Search::new(host, pattern, &[]);
    s.run(&mut |_, _| true)
}

/// Isomorphism test by comparing canonical forms.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && crate::canon::canonical_form(a).0 == crate::canon::canonical_form(b).0
}
