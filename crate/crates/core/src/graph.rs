//! Simple undirected graphs with a fixed vertex range `0..n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// An unordered vertex pair stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    /// Panics on a self-loop; callers that accept user input go through [`Graph::from_edges`].
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.0 == x || self.1 == x
    }

    pub fn other(self, x: Vertex) -> Vertex {
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }

    pub fn map(self, f: impl Fn(Vertex) -> Vertex) -> Edge {
        Edge::new(f(self.0), f(self.1))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
    words: usize,
    bits: Vec<u64>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}

impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Graph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, &self.edges).cmp(&(other.n, &other.edges))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, [", self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

impl Graph {
    /// Builds a graph, merging repeated pairs. Rejects loops and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {a}-{b} out of range for {n} vertices"
                )));
            }
            set.insert(Edge::new(a, b));
        }
        Ok(Self::from_sorted(n, set.into_iter().collect()))
    }

    /// `edges` must be sorted, deduplicated and in range.
    pub(crate) fn from_sorted(n: usize, edges: Vec<Edge>) -> Graph {
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![Vec::new(); n];
        let mut bits = vec![0u64; words * n];
        for &Edge(a, b) in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
            bits[a as usize * words + b as usize / 64] |= 1 << (b % 64);
            bits[b as usize * words + a as usize / 64] |= 1 << (a % 64);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj, words, bits }
    }

    pub fn from_edge_set(n: usize, edges: &BTreeSet<Edge>) -> Graph {
        Self::from_sorted(n, edges.iter().copied().collect())
    }

    pub fn empty(n: usize) -> Graph {
        Self::from_sorted(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n as Vertex {
            for b in a + 1..n as Vertex {
                edges.push(Edge(a, b));
            }
        }
        Self::from_sorted(n, edges)
    }

    /// The cycle `0-1-...-(n-1)-0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let pairs = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex));
        Self::from_edges(n, pairs).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Graph {
        let pairs = (1..n as Vertex).map(|i| (i - 1, i));
        Self::from_edges(n, pairs).expect("path is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut pairs = Vec::new();
        for x in 0..a as Vertex {
            for y in 0..b as Vertex {
                pairs.push((x, a as Vertex + y));
            }
        }
        Self::from_edges(a + b, pairs).expect("bipartite graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n as Vertex
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.adj[v].len()).min()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        if a == b || a as usize >= self.n || b as usize >= self.n {
            return false;
        }
        self.bits[a as usize * self.words + b as usize / 64] >> (b % 64) & 1 == 1
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.0, e.1)
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Adjacency row of `v` as a bitset of `words()` 64-bit words.
    pub fn row(&self, v: Vertex) -> &[u64] {
        &self.bits[v as usize * self.words..(v as usize + 1) * self.words]
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut pos = vec![u32::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| pos[e.0 as usize] != u32::MAX && pos[e.1 as usize] != u32::MAX)
            .map(|e| Edge::new(pos[e.0 as usize], pos[e.1 as usize]))
            .collect();
        edges.sort_unstable();
        Self::from_sorted(vertices.len(), edges)
    }

    /// Relabel so that vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<Edge> = self.edges.iter().map(|e| e.map(|x| perm[x as usize])).collect();
        edges.sort_unstable();
        Self::from_sorted(self.n, edges)
    }

    pub fn with_edge(&self, e: Edge) -> Graph {
        let mut edges = self.edges.clone();
        if let Err(i) = edges.binary_search(&e) {
            edges.insert(i, e);
        }
        Self::from_sorted(self.n.max(e.1 as usize + 1), edges)
    }

    pub fn without_edge(&self, e: Edge) -> Graph {
        let edges = self.edges.iter().copied().filter(|&f| f != e).collect();
        Self::from_sorted(self.n, edges)
    }

    /// Vertex-disjoint union; the vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n as Vertex;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge(e.0 + shift, e.1 + shift)));
        Self::from_sorted(self.n + other.n, edges)
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s as Vertex];
            let mut stack = vec![s as Vertex];
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Vertices with at least one incident edge.
    pub fn non_isolated(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.degree(v) > 0).collect()
    }
}

/// Union of two graphs on a shared vertex namespace.
pub fn graph_union(a: &Graph, b: &Graph) -> Graph {
    let mut set: BTreeSet<Edge> = a.edges.iter().copied().collect();
    set.extend(b.edges.iter().copied());
    Graph::from_edge_set(a.n.max(b.n), &set)
}

/// A subgraph of some host, kept in the host's vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgraph {
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<Edge>,
}

impl Subgraph {
    pub fn new() -> Subgraph {
        Subgraph::default()
    }

    pub fn from_parts<V, E>(vertices: V, edges: E) -> Subgraph
    where
        V: IntoIterator<Item = Vertex>,
        E: IntoIterator<Item = Edge>,
    {
        let mut s = Subgraph {
            vertices: vertices.into_iter().collect(),
            edges: BTreeSet::new(),
        };
        for e in edges {
            s.add_edge(e);
        }
        s
    }

    /// The whole of `g` as a subgraph of itself.
    pub fn whole(g: &Graph) -> Subgraph {
        Subgraph::from_parts(g.vertices(), g.edges().iter().copied())
    }

    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, e: Edge) {
        self.vertices.insert(e.0);
        self.vertices.insert(e.1);
        self.edges.insert(e);
    }

    pub fn union_with(&mut self, other: &Subgraph) {
        self.vertices.extend(other.vertices.iter().copied());
        self.edges.extend(other.edges.iter().copied());
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn contains(&self, other: &Subgraph) -> bool {
        other.vertices.is_subset(&self.vertices) && other.edges.is_subset(&self.edges)
    }

    /// Compact copy labelled `0..v` plus the map from new labels back to host labels.
    pub fn to_graph(&self) -> (Graph, Vec<Vertex>) {
        let verts: Vec<Vertex> = self.vertices.iter().copied().collect();
        let index = |x: Vertex| verts.binary_search(&x).expect("edge endpoint in vertex set") as Vertex;
        let mut edges: Vec<Edge> = self.edges.iter().map(|e| e.map(index)).collect();
        edges.sort_unstable();
        (Graph::from_sorted(verts.len(), edges), verts)
    }
}
