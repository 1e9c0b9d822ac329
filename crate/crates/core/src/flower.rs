//! Flower attachments: a copy of `H₂` glued to a base graph `F` at one edge
//! `ê`, with a copy of `H₁` glued to each of its other edges.
//!
//! `FlowerAttachment` stores the gluing maps, so the fully disjoint version
//! `J*` of any instance `J` can be rebuilt with the same anchor choices. The
//! module also carries the edge ordering used to compare the external
//! density of `J` with that of `J*`, together with the vanished-vertex and
//! vanished-edge bookkeeping along that ordering.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::density::PairSpec;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::rational::Rational;
use crate::report::ser_ratio;

/// The disjointness clause an `ℋ` instance breaks, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FlowerClass {
    HStar,
    /// Outer vertex sets of two pendants meet.
    SharedOuterVertices(Edge, Edge),
    /// Outer edge sets of two pendants meet.
    SharedOuterEdges(Edge, Edge),
    /// A pendant's outer vertices meet the inner graph.
    TouchesInnerGraph(Edge),
}

impl FlowerClass {
    pub fn is_star(&self) -> bool {
        matches!(self, FlowerClass::HStar)
    }
}

#[derive(Clone, Debug)]
pub struct FlowerAttachment {
    pub h1: Graph,
    pub h2: Graph,
    /// `F`, occupying vertices `0..v(F)` of `graph`.
    pub base: Graph,
    pub anchor: Edge,
    /// `J`.
    pub graph: Graph,
    /// Vertex `x` of `H₂` sits at `inner[x]`.
    pub inner: Vec<Vertex>,
    /// For each inner edge `f`, vertex `x` of `H₁` sits at `pendants[f][x]`.
    pub pendants: BTreeMap<Edge, Vec<Vertex>>,
    pub class: FlowerClass,
}

fn image(pattern: &Graph, map: &[Vertex]) -> BTreeSet<Edge> {
    pattern.edges().iter().map(|e| e.map(|x| map[x as usize])).collect()
}

fn injective(map: &[Vertex]) -> bool {
    map.iter().collect::<BTreeSet<_>>().len() == map.len()
}

impl FlowerAttachment {
    /// Builds `J` from the gluing maps and checks every constraint of the
    /// construction.
    pub fn from_parts(
        h1: &Graph,
        h2: &Graph,
        base: &Graph,
        anchor: Edge,
        inner: Vec<Vertex>,
        pendants: BTreeMap<Edge, Vec<Vertex>>,
    ) -> Result<FlowerAttachment> {
        let bad = |m: String| Err(Error::Precondition(m));
        let nf = base.vertex_count() as Vertex;
        if !base.contains_edge(anchor) {
            return bad(format!("anchor {anchor} is not an edge of the base"));
        }
        if inner.len() != h2.vertex_count() || !injective(&inner) {
            return bad("inner map is not an injection of H2".into());
        }
        for &x in &inner {
            if x < nf && !anchor.contains(x) {
                return bad(format!("inner copy uses base vertex {x} outside the anchor"));
            }
        }
        let inner_edges = image(h2, &inner);
        if !inner_edges.contains(&anchor) {
            return bad("inner copy does not contain the anchor".into());
        }
        let mut fe: BTreeSet<Edge> = base.edges().iter().copied().collect();
        fe.extend(inner_edges.iter().copied());
        let mut all = fe.clone();
        let inner_set: Vec<Edge> = inner_edges.iter().copied().filter(|&e| e != anchor).collect();
        if pendants.keys().copied().collect::<Vec<_>>() != inner_set {
            return bad("pendant keys must be exactly the inner edges".into());
        }
        for (&f, map) in &pendants {
            if map.len() != h1.vertex_count() || !injective(map) {
                return bad(format!("pendant map at {f} is not an injection of H1"));
            }
            if map.iter().any(|&x| x < nf && !anchor.contains(x)) {
                return bad(format!("pendant at {f} uses a base vertex outside the anchor"));
            }
            let es = image(h1, map);
            if !es.contains(&f) {
                return bad(format!("pendant at {f} does not contain {f}"));
            }
            if let Some(e) = es.iter().find(|&&e| e != f && fe.contains(&e)) {
                return bad(format!("pendant at {f} reuses edge {e} of the base or inner copy"));
            }
            all.extend(es);
        }
        let n = pendants.values().flatten().chain(&inner).map(|&x| x as usize + 1).max().unwrap_or(0).max(nf as usize);
        let graph = Graph::from_edge_set(n, &all);
        if graph.vertices().any(|x| x >= nf && graph.degree(x) == 0) {
            return bad("vertex labels must be contiguous".into());
        }
        let mut j = FlowerAttachment {
            h1: h1.clone(),
            h2: h2.clone(),
            base: base.clone(),
            anchor,
            graph,
            inner,
            pendants,
            class: FlowerClass::HStar,
        };
        j.class = j.classify();
        Ok(j)
    }

    pub fn inner_edges(&self) -> Vec<Edge> {
        self.pendants.keys().copied().collect()
    }

    /// `V(H_ê)`, which is also the vertex set of the inner graph.
    pub fn inner_graph_vertices(&self) -> BTreeSet<Vertex> {
        self.inner.iter().copied().collect()
    }

    pub fn inner_vertices(&self) -> BTreeSet<Vertex> {
        self.inner.iter().copied().filter(|&x| !self.anchor.contains(x)).collect()
    }

    /// `U(f) = V(H_f) ∖ f`.
    pub fn outer_vertices(&self, f: Edge) -> BTreeSet<Vertex> {
        self.pendants[&f].iter().copied().filter(|&x| !f.contains(x)).collect()
    }

    /// `D(f) = E(H_f) ∖ {f}`.
    pub fn outer_edges(&self, f: Edge) -> BTreeSet<Edge> {
        let mut d = image(&self.h1, &self.pendants[&f]);
        d.remove(&f);
        d
    }

    fn classify(&self) -> FlowerClass {
        let fs = self.inner_edges();
        let hv = self.inner_graph_vertices();
        for &f in &fs {
            if !self.outer_vertices(f).is_disjoint(&hv) {
                return FlowerClass::TouchesInnerGraph(f);
            }
        }
        for (i, &f) in fs.iter().enumerate() {
            for &g in &fs[i + 1..] {
                if !self.outer_vertices(f).is_disjoint(&self.outer_vertices(g)) {
                    return FlowerClass::SharedOuterVertices(f, g);
                }
                if !self.outer_edges(f).is_disjoint(&self.outer_edges(g)) {
                    return FlowerClass::SharedOuterEdges(f, g);
                }
            }
        }
        FlowerClass::HStar
    }

    /// `e(J) − e(F)`.
    pub fn external_edges(&self) -> usize {
        self.graph.edge_count() - self.base.edge_count()
    }

    /// `v(J) − v(F)`.
    pub fn external_vertices(&self) -> usize {
        self.graph.vertex_count() - self.base.vertex_count()
    }

    pub fn external_density(&self) -> Rational {
        Rational::new(self.external_edges() as i64, self.external_vertices() as i64)
    }

    /// The same gluing with every outer vertex made new.
    pub fn star_version(&self) -> FlowerAttachment {
        let mut next = self.inner.iter().copied().max().unwrap_or(0).max(self.base.vertex_count() as Vertex - 1) + 1;
        let pendants = self
            .pendants
            .iter()
            .map(|(&f, map)| {
                let m = map
                    .iter()
                    .map(|&x| {
                        if f.contains(x) {
                            x
                        } else {
                            next += 1;
                            next - 1
                        }
                    })
                    .collect();
                (f, m)
            })
            .collect();
        FlowerAttachment::from_parts(&self.h1, &self.h2, &self.base, self.anchor, self.inner.clone(), pendants)
            .expect("disjoint gluing satisfies the construction")
    }
}

/// `e₁(e₂−1) / ((v₁−2)(e₂−1) + v₂−2)`, the external density of every `ℋ*` instance.
pub fn star_density_closed_form(h1: &Graph, h2: &Graph) -> Rational {
    let (v1, e1, v2, e2) = (h1.vertex_count() as i64, h1.edge_count() as i64, h2.vertex_count() as i64, h2.edge_count() as i64);
    Rational::new(e1 * (e2 - 1), (v1 - 2) * (e2 - 1) + v2 - 2)
}

/// Glues a random instance onto `base` at `anchor`. Each outer vertex of a
/// pendant is, with probability `reuse`, identified with an existing vertex
/// where the construction allows it, and is new otherwise.
pub fn random_flower<R: Rng + ?Sized>(
    h1: &Graph,
    h2: &Graph,
    base: &Graph,
    anchor: Edge,
    reuse: f64,
    rng: &mut R,
) -> FlowerAttachment {
    let nf = base.vertex_count() as Vertex;
    let mut next = nf;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let arc = |g: &Graph, rng: &mut R| {
        let e = g.edges()[rng.random_range(0..g.edge_count())];
        if rng.random_bool(0.5) {
            (e.0, e.1)
        } else {
            (e.1, e.0)
        }
    };
    let (a, b) = arc(h2, rng);
    let inner: Vec<Vertex> = h2
        .vertices()
        .map(|x| if x == a { anchor.0 } else if x == b { anchor.1 } else { fresh() })
        .collect();
    let mut fe: BTreeSet<Edge> = base.edges().iter().copied().collect();
    fe.extend(image(h2, &inner));
    let mut pool: Vec<Vertex> = inner.clone();
    let mut pendants = BTreeMap::new();
    let inner_edges: Vec<Edge> = image(h2, &inner).into_iter().filter(|&e| e != anchor).collect();
    for f in inner_edges {
        let (p, q) = arc(h1, rng);
        let mut map = vec![Vertex::MAX; h1.vertex_count()];
        map[p as usize] = f.0;
        map[q as usize] = f.1;
        let mut rest: Vec<Vertex> = h1.vertices().filter(|&x| x != p && x != q).collect();
        rest.shuffle(rng);
        for x in rest {
            let mut target = None;
            if rng.random_bool(reuse) {
                let ok: Vec<Vertex> = pool
                    .iter()
                    .copied()
                    .filter(|&y| !map.contains(&y))
                    .filter(|&y| {
                        h1.neighbors(x).iter().all(|&nb| {
                            let t = map[nb as usize];
                            t == Vertex::MAX || !fe.contains(&Edge::new(y, t))
                        })
                    })
                    .collect();
                if !ok.is_empty() {
                    target = Some(ok[rng.random_range(0..ok.len())]);
                }
            }
            map[x as usize] = target.unwrap_or_else(&mut fresh);
        }
        for &y in &map {
            if !pool.contains(&y) {
                pool.push(y);
            }
        }
        pendants.insert(f, map);
    }
    FlowerAttachment::from_parts(h1, h2, base, anchor, inner, pendants).expect("sampler respects the construction")
}

/// A random connected graph on `2..=max_vertices` vertices with a random edge.
pub fn random_base<R: Rng + ?Sized>(max_vertices: usize, rng: &mut R) -> (Graph, Edge) {
    let n = rng.random_range(2..=max_vertices.max(2));
    let mut edges = BTreeSet::new();
    for v in 1..n as Vertex {
        edges.insert(Edge::new(v, rng.random_range(0..v)));
    }
    for a in 0..n as Vertex {
        for b in a + 1..n as Vertex {
            if rng.random_bool(0.3) {
                edges.insert(Edge::new(a, b));
            }
        }
    }
    let g = Graph::from_edge_set(n, &edges);
    let e = g.edges()[rng.random_range(0..g.edge_count())];
    (g, e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub edges: Vec<Edge>,
    pub vertices: BTreeSet<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeOrder {
    /// Inner edges in push order.
    pub order: Vec<Edge>,
    pub clusters: Vec<Cluster>,
    /// Edges pushed after the last cluster.
    pub fall_through: Vec<Edge>,
}

/// Orders the inner edges: seed a cluster with an edge whose outer edges
/// meet those of another remaining edge, then absorb every remaining edge
/// with both ends in the cluster's vertex set or with outer edges meeting
/// the cluster's. Whatever is left is pushed last. Ties go to the least edge.
pub fn order_edges(j: &FlowerAttachment) -> EdgeOrder {
    let hv = j.inner_graph_vertices();
    let d: BTreeMap<Edge, BTreeSet<Edge>> = j.inner_edges().into_iter().map(|f| (f, j.outer_edges(f))).collect();
    let touch = |f: Edge| -> BTreeSet<Vertex> {
        let mut s: BTreeSet<Vertex> = j.outer_vertices(f).intersection(&hv).copied().collect();
        s.extend([f.0, f.1]);
        s
    };
    let mut left: BTreeSet<Edge> = d.keys().copied().collect();
    let mut out = EdgeOrder { order: Vec::new(), clusters: Vec::new(), fall_through: Vec::new() };
    loop {
        let seed = left
            .iter()
            .copied()
            .find(|&f| left.iter().any(|&g| g != f && !d[&f].is_disjoint(&d[&g])));
        let Some(f) = seed else { break };
        left.remove(&f);
        out.order.push(f);
        let mut cluster = Cluster { edges: vec![f], vertices: touch(f) };
        let mut dunion = d[&f].clone();
        while let Some(uw) = left.iter().copied().find(|&uw| {
            (cluster.vertices.contains(&uw.0) && cluster.vertices.contains(&uw.1)) || !d[&uw].is_disjoint(&dunion)
        }) {
            left.remove(&uw);
            out.order.push(uw);
            cluster.edges.push(uw);
            cluster.vertices.extend(touch(uw));
            dunion.extend(d[&uw].iter().copied());
        }
        out.clusters.push(cluster);
    }
    out.fall_through = left.iter().copied().collect();
    out.order.extend(left);
    out
}

/// Per-edge bookkeeping along an ordering.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaRow {
    pub edge: Edge,
    /// Index of the cluster holding the edge, if any.
    pub cluster: Option<usize>,
    pub delta_e: usize,
    pub delta_v: usize,
    /// Vertices of `T(f) = (Δ_V(f) ∪ f, Δ_E(f))`.
    pub t_vertices: BTreeSet<Vertex>,
    pub t_edges: BTreeSet<Edge>,
    /// `T(f)` without isolated vertices.
    pub t_prime_vertices: BTreeSet<Vertex>,
    /// Inner-graph vertices new to the cluster when `f` joined it, minus `f`.
    pub new_inner: BTreeSet<Vertex>,
}

pub fn delta_accounting(j: &FlowerAttachment, ord: &EdgeOrder) -> Vec<DeltaRow> {
    let hv = j.inner_graph_vertices();
    let mut seen_d: BTreeSet<Edge> = BTreeSet::new();
    let mut seen_u: BTreeSet<Vertex> = BTreeSet::new();
    let cluster_of: BTreeMap<Edge, usize> =
        ord.clusters.iter().enumerate().flat_map(|(i, c)| c.edges.iter().map(move |&f| (f, i))).collect();
    let mut cluster_seen: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); ord.clusters.len()];
    let mut rows = Vec::new();
    for &f in &ord.order {
        let u = j.outer_vertices(f);
        let d = j.outer_edges(f);
        let de: BTreeSet<Edge> = d.intersection(&seen_d).copied().collect();
        let dv: BTreeSet<Vertex> = u.iter().copied().filter(|x| seen_u.contains(x) || hv.contains(x)).collect();
        let mut t_vertices = dv.clone();
        t_vertices.extend([f.0, f.1]);
        let t_prime_vertices: BTreeSet<Vertex> = de.iter().flat_map(|e| [e.0, e.1]).collect();
        let cluster = cluster_of.get(&f).copied();
        let new_inner = match cluster {
            Some(i) => {
                let hit: BTreeSet<Vertex> = u.intersection(&hv).copied().collect();
                let out = hit.iter().copied().filter(|x| !cluster_seen[i].contains(x)).collect();
                cluster_seen[i].extend([f.0, f.1]);
                cluster_seen[i].extend(hit);
                out
            }
            None => BTreeSet::new(),
        };
        rows.push(DeltaRow {
            edge: f,
            cluster,
            delta_e: de.len(),
            delta_v: dv.len(),
            t_vertices,
            t_edges: de,
            t_prime_vertices,
            new_inner,
        });
        seen_d.extend(d);
        seen_u.extend(u);
    }
    rows
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderAudit {
    pub order: EdgeOrder,
    pub rows: Vec<DeltaRow>,
    pub failures: Vec<String>,
}

/// Checks the ordering and its bookkeeping:
///
/// * every inner edge appears once, clusters are edge-disjoint with at least
///   two edges each and there are at most `⌊e₂/2⌋` of them;
/// * `e⁺(J*) − e⁺(J) = ΣΔ_e` and `v⁺(J*) − v⁺(J) = ΣΔ_v`;
/// * `T(f)` is a graph, `(V(H_ê⁻))_f ⊆ Δ_V(f)` and is isolated in `T(f)`;
/// * fall-through edges have `Δ_e = 0`;
/// * each cluster has `ΣΔ_e < m₂(H₁,H₂)·ΣΔ_v`;
/// * each edge with `Δ_e ≥ 1` has
///   `Δ_e < m₂(H₁,H₂)(Δ_v − (2 − |f ∩ V(T′)|) − |(V(H_ê⁻))_f| + 1/m₂(H₂))`.
pub fn audit_order(j: &FlowerAttachment, pair: &PairSpec) -> OrderAudit {
    let order = order_edges(j);
    let rows = delta_accounting(j, &order);
    let mut failures = Vec::new();
    let inner = j.inner_edges();
    let mut sorted = order.order.clone();
    sorted.sort();
    if sorted != inner {
        failures.push("ordering is not a permutation of the inner edges".into());
    }
    let mut used = BTreeSet::new();
    for c in &order.clusters {
        if c.edges.len() < 2 {
            failures.push(format!("cluster {:?} has fewer than two edges", c.edges));
        }
        for &f in &c.edges {
            if !used.insert(f) {
                failures.push(format!("edge {f} is in two clusters"));
            }
        }
    }
    if order.clusters.len() > j.h2.edge_count() / 2 {
        failures.push(format!("{} clusters exceed e2/2", order.clusters.len()));
    }
    let star = j.star_version();
    let se: usize = rows.iter().map(|r| r.delta_e).sum();
    let sv: usize = rows.iter().map(|r| r.delta_v).sum();
    if star.external_edges() != j.external_edges() + se {
        failures.push(format!("edge accounting: {} != {} + {se}", star.external_edges(), j.external_edges()));
    }
    if star.external_vertices() != j.external_vertices() + sv {
        failures.push(format!("vertex accounting: {} != {} + {sv}", star.external_vertices(), j.external_vertices()));
    }
    let m2 = pair.m2_pair;
    for r in &rows {
        if r.t_edges.iter().any(|e| !r.t_vertices.contains(&e.0) || !r.t_vertices.contains(&e.1)) {
            failures.push(format!("T({}) has an edge outside its vertex set", r.edge));
        }
        if !r.new_inner.is_subset(&r.t_vertices) || !r.new_inner.is_disjoint(&r.t_prime_vertices) {
            failures.push(format!("new inner vertices at {} are not isolated in T", r.edge));
        }
        if r.cluster.is_none() && r.delta_e != 0 {
            failures.push(format!("fall-through edge {} has delta_e = {}", r.edge, r.delta_e));
        }
        if r.delta_e >= 1 {
            let on_f = [r.edge.0, r.edge.1].iter().filter(|x| r.t_prime_vertices.contains(x)).count() as i64;
            let rhs = m2
                * (Rational::from_integer(r.delta_v as i64 - (2 - on_f) - r.new_inner.len() as i64)
                    + pair.m2_h2.recip());
            if Rational::from_integer(r.delta_e as i64) >= rhs {
                failures.push(format!("edge {}: delta_e = {} not below {rhs}", r.edge, r.delta_e));
            }
        }
    }
    for (i, c) in order.clusters.iter().enumerate() {
        let (e, v) = rows
            .iter()
            .filter(|r| r.cluster == Some(i))
            .fold((0i64, 0i64), |(e, v), r| (e + r.delta_e as i64, v + r.delta_v as i64));
        if Rational::from_integer(e) >= m2 * Rational::from_integer(v) {
            failures.push(format!("cluster {:?}: sum delta_e = {e} not below m2 * {v}", c.edges));
        }
    }
    OrderAudit { order, rows, failures }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutsideDensityCheck {
    #[serde(serialize_with = "ser_ratio")]
    pub density_j: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub density_star: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub closed_form: Rational,
    /// `J` is strictly denser outside `F` than `J*`.
    pub holds: bool,
    /// `J*` matches the closed form.
    pub closed_form_matches: bool,
}

/// Compares the external densities of `j ∈ ℋ∖ℋ*` and `jstar ∈ ℋ*` over the same `F`, `ê`.
pub fn compare_outside_density(j: &FlowerAttachment, jstar: &FlowerAttachment) -> Result<OutsideDensityCheck> {
    if j.class.is_star() {
        return Err(Error::Precondition("first instance breaks no disjointness clause".into()));
    }
    if let c @ (FlowerClass::SharedOuterVertices(..) | FlowerClass::SharedOuterEdges(..) | FlowerClass::TouchesInnerGraph(_)) =
        &jstar.class
    {
        return Err(Error::Precondition(format!("second instance is not fully disjoint: {c:?}")));
    }
    if j.base != jstar.base || j.anchor != jstar.anchor || j.h1 != jstar.h1 || j.h2 != jstar.h2 {
        return Err(Error::Precondition("instances differ in base, anchor or pattern graphs".into()));
    }
    let density_j = j.external_density();
    let density_star = jstar.external_density();
    let closed_form = star_density_closed_form(&j.h1, &j.h2);
    Ok(OutsideDensityCheck {
        density_j,
        density_star,
        closed_form,
        holds: density_j > density_star,
        closed_form_matches: density_star == closed_form,
    })
}

/// The `(C₅, C₆)` instance with two pendant pairs sharing an outer edge and
/// one pendant reaching back to the anchor: `F` is the anchor `ab` with
/// three leaves on each end.
pub fn c5_c6_example() -> FlowerAttachment {
    // a=0 b=1, leaves 2..=7; p q r s = 8..=11; t u w x y k z m n o = 12..=21
    let (a, b, p, q, r, s) = (0, 1, 8, 9, 10, 11);
    let (t, u, w, x, y, k, z, m, n, o) = (12, 13, 14, 15, 16, 17, 18, 19, 20, 21);
    let base = Graph::from_edges(8, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6), (1, 7)]).expect("base");
    let h1 = Graph::cycle(5);
    let h2 = Graph::cycle(6);
    // cycle(n) runs 0-1-...-(n-1)-0
    let inner = vec![a, p, q, r, s, b];
    let pendants = BTreeMap::from([
        (Edge::new(s, b), vec![s, t, u, w, b]),
        (Edge::new(r, s), vec![r, s, t, x, y]),
        (Edge::new(q, r), vec![q, r, k, z, a]),
        (Edge::new(p, q), vec![p, q, k, m, z]),
        (Edge::new(a, p), vec![a, p, z, n, o]),
    ]);
    FlowerAttachment::from_parts(&h1, &h2, &base, Edge::new(a, b), inner, pendants).expect("example is well formed")
}
