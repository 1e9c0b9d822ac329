//! Bounded enumeration of the family `Â(H₁, H₂, ε)`.
//!
//! Every member is a union of copies of `H₁` and `H₂`, and every subgraph of
//! a member has maximum density at most `m₂(H₁,H₂) + ε`. The search starts
//! from a single edge and grows one copy at a time:
//!
//! * if some edge is not yet the unique common edge of a copy of `H₂` and a
//!   copy of `H₁`, the only children are the ways of adding one copy of `H₁`
//!   or `H₂` through that edge (any member containing the current graph must
//!   contain such a copy that is not already present);
//! * otherwise the current graph is recorded if it qualifies, and the
//!   children are all ways of adding a copy that shares a vertex with it.
//!
//! Children above the vertex bound or above the density bound are dropped;
//! both bounds are inherited by subgraphs, so no member is lost.

use std::collections::{BTreeSet, HashSet};

use crate::canon::canonical_key;
use crate::density::PairSpec;
use crate::embed::{embeddings, enumerate_copies};
use crate::families::{a_hat_membership, max_density_at_most, unique_pair_edges};
use crate::graph::{Edge, Graph, Vertex};
use crate::oracle::{has_valid_coloring, Verdict};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct AHatOptions {
    pub max_vertices: usize,
    /// Use the minimum-degree bound `δ(A) ≥ δ(H₁) + δ(H₂) − 1` of members:
    /// skip the search outright when it forces `m(A) > m₂(H₁,H₂) + ε`, and
    /// drop states that cannot be completed within the vertex bound.
    pub degree_prune: bool,
    /// Node budget for the colouring search on each member.
    pub coloring_budget: u64,
    /// Stop after this many search states; the catalog is then marked incomplete.
    pub state_limit: Option<usize>,
}

impl AHatOptions {
    pub fn new(max_vertices: usize) -> AHatOptions {
        AHatOptions { max_vertices, degree_prune: true, coloring_budget: 1_000_000, state_limit: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MemberVerdict {
    Valid,
    Invalid,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct AHatMember {
    pub graph: Graph,
    pub verdict: MemberVerdict,
}

#[derive(Clone, Debug)]
pub struct AHatCatalog {
    pub max_vertices: usize,
    pub members: Vec<AHatMember>,
    pub states_explored: usize,
    /// False only when the state limit cut the search short.
    pub complete: bool,
    /// True when the degree argument emptied the family before searching.
    pub degree_pruned: bool,
}

impl AHatCatalog {
    pub fn graphs(&self) -> Vec<Graph> {
        self.members.iter().map(|m| m.graph.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Every graph `p ∪ φ(pattern)` where `φ` is injective, agrees with `fixed`,
/// and sends the remaining pattern vertices to vertices of `p` or to new
/// vertices. Results are canonical and must add at least one edge.
fn placements(
    p: &Graph,
    pattern: &Graph,
    fixed: &[(Vertex, Vertex)],
    bound: usize,
    keep: &dyn Fn(&Graph) -> bool,
    out: &mut BTreeSet<Graph>,
) {
    let k = p.vertex_count();
    let t = pattern.vertex_count();
    let mut order: Vec<Vertex> = fixed.iter().map(|&(pv, _)| pv).collect();
    order.extend((0..t as Vertex).filter(|v| !fixed.iter().any(|&(pv, _)| pv == *v)));
    let mut map = vec![u32::MAX; t];
    let mut used = vec![false; k];
    for &(pv, hv) in fixed {
        map[pv as usize] = hv;
        used[hv as usize] = true;
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        p: &Graph,
        pattern: &Graph,
        order: &[Vertex],
        depth: usize,
        fresh: usize,
        map: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        bound: usize,
        keep: &dyn Fn(&Graph) -> bool,
        out: &mut BTreeSet<Graph>,
    ) {
        let k = p.vertex_count();
        if k + fresh > bound {
            return;
        }
        if depth == order.len() {
            let mut edges: BTreeSet<Edge> = p.edges().iter().copied().collect();
            let before = edges.len();
            for e in pattern.edges() {
                edges.insert(e.map(|x| map[x as usize]));
            }
            if edges.len() > before {
                let g = Graph::from_edge_set(k + fresh, &edges);
                if keep(&g) {
                    out.insert(canonical_key(&g));
                }
            }
            return;
        }
        let pv = order[depth] as usize;
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                map[pv] = x as Vertex;
                rec(p, pattern, order, depth + 1, fresh, map, used, bound, keep, out);
                used[x] = false;
            }
        }
        map[pv] = (k + fresh) as Vertex;
        rec(p, pattern, order, depth + 1, fresh + 1, map, used, bound, keep, out);
        map[pv] = u32::MAX;
    }

    let start = fixed.len();
    rec(p, pattern, &order, start, 0, &mut map, &mut used, bound, keep, out);
}

/// A pattern with one representative per automorphism orbit of its
/// vertices and of its oriented edges.
struct Pattern {
    graph: Graph,
    vertex_reps: Vec<Vertex>,
    arc_reps: Vec<(Vertex, Vertex)>,
}

impl Pattern {
    fn new(graph: &Graph) -> Pattern {
        let autos = embeddings(graph, graph);
        let mut vertex_reps = Vec::new();
        let mut seen_v = BTreeSet::new();
        for v in graph.vertices() {
            if seen_v.insert(v) {
                vertex_reps.push(v);
                seen_v.extend(autos.iter().map(|a| a.vertex_map[v as usize]));
            }
        }
        let mut arc_reps = Vec::new();
        let mut seen_a = BTreeSet::new();
        for e in graph.edges() {
            for (a, b) in [(e.0, e.1), (e.1, e.0)] {
                if seen_a.insert((a, b)) {
                    arc_reps.push((a, b));
                    seen_a.extend(autos.iter().map(|m| (m.vertex_map[a as usize], m.vertex_map[b as usize])));
                }
            }
        }
        Pattern { graph: graph.clone(), vertex_reps, arc_reps }
    }
}

fn children_through(p: &Graph, patterns: &[Pattern], e: Edge, bound: usize, keep: &dyn Fn(&Graph) -> bool) -> BTreeSet<Graph> {
    let mut out = BTreeSet::new();
    for pat in patterns {
        for &(a, b) in &pat.arc_reps {
            placements(p, &pat.graph, &[(a, e.0), (b, e.1)], bound, keep, &mut out);
        }
    }
    out
}

fn children_touching(p: &Graph, patterns: &[Pattern], bound: usize, keep: &dyn Fn(&Graph) -> bool) -> BTreeSet<Graph> {
    let mut out = BTreeSet::new();
    for pat in patterns {
        for &w in &pat.vertex_reps {
            for x in p.vertices() {
                placements(p, &pat.graph, &[(w, x)], bound, keep, &mut out);
            }
        }
    }
    out
}

/// The first edge that is not the unique common edge of a copy of `H₂` and one of `H₁`.
pub(crate) fn first_deficient_edge(g: &Graph, pair: &PairSpec) -> Option<Edge> {
    let ls = enumerate_copies(g, &pair.h2);
    let rs = enumerate_copies(g, &pair.h1);
    let good = unique_pair_edges(&ls, &rs);
    g.edges().iter().copied().find(|e| !good.contains(e))
}

pub fn degree_bound_excludes(pair: &PairSpec) -> bool {
    let d1 = pair.h1.min_degree().unwrap_or(0) as i64;
    let d2 = pair.h2.min_degree().unwrap_or(0) as i64;
    let need: Rational = Rational::new(d1 + d2 - 1, 2);
    need > pair.m2_pair + pair.epsilon
}

/// Can some graph `A ⊇ p` on at most `bound` vertices have minimum degree
/// at least `min_deg` and `e(A) ≤ cap · v(A)`?
///
/// Each vertex short of `min_deg` in `p` needs new edges, and each new vertex
/// needs `min_deg` of them, so `e(A) ≥ e(p) + (deficit + min_deg·(v(A) − v(p)))/2`.
fn degree_feasible(p: &Graph, min_deg: usize, cap: Rational, bound: usize) -> bool {
    let k = p.vertex_count();
    let deficit: usize = p.vertices().map(|x| min_deg.saturating_sub(p.degree(x))).sum();
    let base = Rational::from_integer((2 * p.edge_count() + deficit) as i64 - (min_deg * k) as i64) / 2;
    let slope = cap - Rational::new(min_deg as i64, 2);
    // base ≤ slope · v(A) for some v(A) in k..=bound
    let best_v = if slope > Rational::from_integer(0) { bound } else { k };
    base <= slope * Rational::from_integer(best_v as i64)
}

pub fn enumerate_a_hat(pair: &PairSpec, max_vertices: usize) -> AHatCatalog {
    enumerate_a_hat_with(pair, &AHatOptions::new(max_vertices))
}

pub fn enumerate_a_hat_with(pair: &PairSpec, opts: &AHatOptions) -> AHatCatalog {
    let bound = opts.max_vertices;
    let mut catalog =
        AHatCatalog { max_vertices: bound, members: Vec::new(), states_explored: 0, complete: true, degree_pruned: false };
    if opts.degree_prune && degree_bound_excludes(pair) {
        catalog.degree_pruned = true;
        return catalog;
    }
    if bound < 2 {
        return catalog;
    }
    let density_cap = pair.m2_pair + pair.epsilon;
    // Any member A has, at each vertex x, an edge xy with copies L ∋ xy of H₂
    // and R ∋ xy of H₁ sharing only xy, so deg(x) ≥ δ(H₁) + δ(H₂) − 1.
    let min_deg = (pair.h1.min_degree().unwrap_or(0) + pair.h2.min_degree().unwrap_or(0)).saturating_sub(1);
    let patterns = [Pattern::new(&pair.h2), Pattern::new(&pair.h1)];
    let keep = |g: &Graph| {
        (!opts.degree_prune || degree_feasible(g, min_deg, density_cap, bound)) && max_density_at_most(g, density_cap)
    };
    let root = Graph::complete(2);
    let mut seen: HashSet<Graph> = HashSet::from([root.clone()]);
    let mut stack = vec![root];
    let mut found: BTreeSet<Graph> = BTreeSet::new();
    while let Some(p) = stack.pop() {
        catalog.states_explored += 1;
        if opts.state_limit.is_some_and(|lim| catalog.states_explored > lim) {
            catalog.complete = false;
            break;
        }
        let kids = match first_deficient_edge(&p, pair) {
            Some(e) => children_through(&p, &patterns, e, bound, &keep),
            None => {
                if a_hat_membership(&p, pair) {
                    found.insert(p.clone());
                }
                children_touching(&p, &patterns, bound, &keep)
            }
        };
        for c in kids {
            if !seen.contains(&c) {
                seen.insert(c.clone());
                stack.push(c);
            }
        }
    }
    catalog.members = found
        .into_iter()
        .map(|g| {
            let verdict = match has_valid_coloring(&g, pair, opts.coloring_budget).verdict {
                Verdict::Valid(_) => MemberVerdict::Valid,
                Verdict::Invalid => MemberVerdict::Invalid,
                Verdict::BudgetExceeded => MemberVerdict::BudgetExceeded,
            };
            AHatMember { graph: g, verdict }
        })
        .collect();
    catalog
        .members
        .sort_by(|a, b| (a.graph.vertex_count(), a.graph.edge_count(), &a.graph).cmp(&(b.graph.vertex_count(), b.graph.edge_count(), &b.graph)));
    catalog
}
