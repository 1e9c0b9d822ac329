//! Fixed inputs shared by the benchmarks.

use asym_ramsey::{sample_gnp, Graph};

/// `K_a □ K_a`, a sparse host in the closed family of clique/4-cycle pairs.
pub fn rook(a: u32) -> Graph {
    let mut edges = Vec::new();
    for r in 0..a {
        for c in 0..a {
            for d in c + 1..a {
                edges.push((r * a + c, r * a + d));
                edges.push((c * a + r, d * a + r));
            }
        }
    }
    Graph::from_edges((a * a) as usize, edges).expect("rook graph is simple")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.extend([(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)]);
    }
    Graph::from_edges(10, edges).expect("petersen graph is simple")
}

/// Deterministic `G(n,p)` samples, one per seed.
pub fn samples(n: usize, p: f64, count: u64) -> Vec<Graph> {
    (0..count).map(|s| sample_gnp(n, p, s)).collect()
}
