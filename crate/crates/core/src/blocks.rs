//! Biconnected blocks and 2-connectivity.

use std::collections::BTreeSet;

use crate::graph::{Edge, Graph, Vertex};

/// A maximal 2-connected piece of a graph (a bridge is a two-vertex block).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// The block relabelled `0..k` following the order of `vertices`.
    pub graph: Graph,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

struct Tarjan<'a> {
    g: &'a Graph,
    disc: Vec<u32>,
    low: Vec<u32>,
    time: u32,
    stack: Vec<Edge>,
    blocks: Vec<Vec<Edge>>,
    cut: Vec<bool>,
}

impl Tarjan<'_> {
    fn visit(&mut self, u: Vertex, parent: Option<Vertex>) {
        self.time += 1;
        self.disc[u as usize] = self.time;
        self.low[u as usize] = self.time;
        let mut children = 0;
        for &w in self.g.neighbors(u) {
            if self.disc[w as usize] == 0 {
                children += 1;
                self.stack.push(Edge::new(u, w));
                self.visit(w, Some(u));
                self.low[u as usize] = self.low[u as usize].min(self.low[w as usize]);
                if self.low[w as usize] >= self.disc[u as usize] {
                    if parent.is_some() {
                        self.cut[u as usize] = true;
                    }
                    let target = Edge::new(u, w);
                    let mut block = Vec::new();
                    while let Some(e) = self.stack.pop() {
                        block.push(e);
                        if e == target {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if Some(w) != parent && self.disc[w as usize] < self.disc[u as usize] {
                self.stack.push(Edge::new(u, w));
                self.low[u as usize] = self.low[u as usize].min(self.disc[w as usize]);
            }
        }
        if parent.is_none() && children > 1 {
            self.cut[u as usize] = true;
        }
    }
}

fn run(g: &Graph) -> Tarjan<'_> {
    let n = g.vertex_count();
    let mut t = Tarjan {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
        cut: vec![false; n],
    };
    for v in g.vertices() {
        if t.disc[v as usize] == 0 {
            t.visit(v, None);
        }
    }
    t
}

/// The blocks of `g`, ordered by their least edge. Isolated vertices belong to no block.
pub fn block_decomposition(g: &Graph) -> Vec<Block> {
    let t = run(g);
    let mut out: Vec<Block> = t
        .blocks
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let vs: BTreeSet<Vertex> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
            let vertices: Vec<Vertex> = vs.into_iter().collect();
            Block { graph: g.induced(&vertices), vertices, edges }
        })
        .collect();
    out.sort_by(|a, b| a.edges.cmp(&b.edges));
    out
}

pub fn cut_vertices(g: &Graph) -> Vec<Vertex> {
    let t = run(g);
    g.vertices().filter(|&v| t.cut[v as usize]).collect()
}

/// At least three vertices, connected, and no cut vertex.
pub fn is_two_connected(g: &Graph) -> bool {
    g.vertex_count() >= 3 && g.is_connected() && cut_vertices(g).is_empty()
}
