//! Membership in the families built from copies of `H₁` and `H₂`: the
//! starred copies `ℒ*`, the classes `𝒞` and `𝒞*`, the small-graph family
//! `Â`, and the decomposition of a graph into maximal `Â`-copies.

use std::collections::{BTreeMap, BTreeSet};

use crate::blocks::is_two_connected;
use crate::density::{PairCase, PairSpec};
use crate::embed::{copies_through, enumerate_copies, CopySet, Occurrence};
use crate::error::{Error, Result};
use crate::flow::max_closure;
use crate::graph::{Edge, Graph, Subgraph};
use crate::oracle::{has_valid_coloring, Colour, Coloring, Verdict};
use crate::rational::Rational;

/// For each edge, does some (L, R) pair meet in exactly that edge?
pub fn unique_pair_edges(ls: &CopySet, rs: &CopySet) -> BTreeSet<Edge> {
    let r_index = rs.edge_index();
    let mut good = BTreeSet::new();
    for l in ls.iter() {
        for &e in &l.edges {
            if good.contains(&e) {
                continue;
            }
            if let Some(idx) = r_index.get(&e) {
                if idx.iter().any(|&k| l.common_edges(&rs.copies[k]) == 1) {
                    good.insert(e);
                }
            }
        }
    }
    good
}

/// Is every edge of `l` met uniquely by some copy in `rs`?
pub fn is_starred(l: &Occurrence, rs: &CopySet, r_index: &BTreeMap<Edge, Vec<usize>>) -> bool {
    l.edges.iter().all(|e| {
        r_index.get(e).is_some_and(|idx| idx.iter().any(|&k| l.common_edges(&rs.copies[k]) == 1))
    })
}

/// `ℒ*_g`: copies of `H₂` each of whose edges is the sole common edge with some copy of `H₁`.
pub fn lstar_members(g: &Graph, pair: &PairSpec) -> CopySet {
    let ls = enumerate_copies(g, &pair.h2);
    let rs = enumerate_copies(g, &pair.h1);
    lstar_from(&ls, &rs)
}

pub fn lstar_from(ls: &CopySet, rs: &CopySet) -> CopySet {
    let r_index = rs.edge_index();
    CopySet {
        pattern: ls.pattern.clone(),
        copies: ls.iter().filter(|l| is_starred(l, rs, &r_index)).cloned().collect(),
    }
}

#[derive(Clone, Debug)]
pub struct FamilyReport {
    pub graph: Graph,
    pub in_c: bool,
    pub in_cstar: bool,
    pub lstar_copies: CopySet,
    /// Edges that are no unique (L, R) intersection.
    pub c_failures: Vec<Edge>,
    /// Edges on no starred copy.
    pub cstar_failures: Vec<Edge>,
    /// For edges that pass, the index of a starred copy through them.
    pub cstar_witness: BTreeMap<Edge, usize>,
}

pub fn family_report(g: &Graph, pair: &PairSpec) -> FamilyReport {
    let ls = enumerate_copies(g, &pair.h2);
    let rs = enumerate_copies(g, &pair.h1);
    let good = unique_pair_edges(&ls, &rs);
    let lstar = lstar_from(&ls, &rs);
    let mut cstar_witness = BTreeMap::new();
    for (i, l) in lstar.iter().enumerate() {
        for &e in &l.edges {
            cstar_witness.entry(e).or_insert(i);
        }
    }
    let c_failures: Vec<Edge> = g.edges().iter().copied().filter(|e| !good.contains(e)).collect();
    let cstar_failures: Vec<Edge> = g.edges().iter().copied().filter(|e| !cstar_witness.contains_key(e)).collect();
    FamilyReport {
        graph: g.clone(),
        in_c: c_failures.is_empty(),
        in_cstar: cstar_failures.is_empty(),
        lstar_copies: lstar,
        c_failures,
        cstar_failures,
        cstar_witness,
    }
}

/// Membership in `𝒞`, with the first failing edge.
pub fn in_c(g: &Graph, pair: &PairSpec) -> (bool, Option<Edge>) {
    let r = family_report(g, pair);
    (r.in_c, r.c_failures.first().copied())
}

/// Membership in `𝒞*`, with the first failing edge.
pub fn in_cstar(g: &Graph, pair: &PairSpec) -> (bool, Option<Edge>) {
    let r = family_report(g, pair);
    (r.in_cstar, r.cstar_failures.first().copied())
}

/// Is `m(g) ≤ bound`? One max-closure computation.
pub fn max_density_at_most(g: &Graph, bound: Rational) -> bool {
    if g.edge_count() == 0 {
        return true;
    }
    let pairs: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.0 as usize, e.1 as usize)).collect();
    // m(g) ≤ a/b  ⇔  b·e(S) − a·|S| ≤ 0 for all S.
    let (val, _) = max_closure(g.vertex_count(), &pairs, *bound.denom(), *bound.numer(), &[]);
    val <= 0
}

/// Membership in `Â`: 2-connected, `m(a) ≤ m₂(H₁,H₂) + ε`, and in `𝒞*`
/// (strict case) or `𝒞` (equal case).
pub fn a_hat_membership(a: &Graph, pair: &PairSpec) -> bool {
    if !max_density_at_most(a, pair.m2_pair + pair.epsilon) || !is_two_connected(a) {
        return false;
    }
    let r = family_report(a, pair);
    match pair.case {
        PairCase::Strict => r.in_cstar,
        PairCase::Equal => r.in_c,
    }
}

#[derive(Clone, Debug)]
pub struct SgDecomposition {
    pub graph: Graph,
    /// Maximal copies of `Â` members, sorted by edge set.
    pub members: Vec<Subgraph>,
    pub per_edge_count: BTreeMap<Edge, usize>,
    /// Copies of `H₁` or `H₂` whose edges touch at least two members.
    pub nontrivial_copies: Vec<Occurrence>,
}

impl SgDecomposition {
    pub fn is_a_hat_graph(&self) -> bool {
        self.graph.edges().iter().all(|e| self.per_edge_count.get(e) == Some(&1))
    }

    pub fn is_sparse(&self) -> bool {
        self.nontrivial_copies.is_empty()
    }

    pub fn is_sparse_a_hat_graph(&self) -> bool {
        self.is_a_hat_graph() && self.is_sparse()
    }

    /// Indices of the members through `e`.
    pub fn members_through(&self, e: Edge) -> Vec<usize> {
        (0..self.members.len()).filter(|&i| self.members[i].edges.contains(&e)).collect()
    }
}

/// The copies not contained in a larger one, in their original order.
///
/// Copies are edge bitsets over `g`; a copy can only be contained in another
/// one through its lowest edge, so candidates come from that edge's list.
fn maximal_copies(g: &Graph, all: Vec<Subgraph>) -> Vec<Subgraph> {
    let words = g.edge_count().div_ceil(64);
    let bits: Vec<Vec<u64>> = all
        .iter()
        .map(|s| {
            let mut b = vec![0u64; words];
            for &e in &s.edges {
                let i = g.edge_index(e).expect("copy edge in host");
                b[i / 64] |= 1 << (i % 64);
            }
            b
        })
        .collect();
    let mut by_edge: Vec<Vec<usize>> = vec![Vec::new(); g.edge_count()];
    for (k, s) in all.iter().enumerate() {
        for &e in &s.edges {
            by_edge[g.edge_index(e).expect("copy edge in host")].push(k);
        }
    }
    let subset = |a: &[u64], b: &[u64]| a.iter().zip(b).all(|(x, y)| x & !y == 0);
    (0..all.len())
        .filter(|&k| {
            let Some(&first) = all[k].edges.iter().next() else { return true };
            let cands = &by_edge[g.edge_index(first).expect("copy edge in host")];
            !cands.iter().any(|&t| all[t].edges.len() > all[k].edges.len() && subset(&bits[k], &bits[t]))
        })
        .map(|k| all[k].clone())
        .collect()
}

/// `|𝒮_g(e)|`, from the copies through `e` alone: anything containing a
/// copy through `e` also runs through `e`.
pub fn member_count_through(g: &Graph, a_hat: &[Graph], e: Edge) -> usize {
    let mut all: BTreeSet<Subgraph> = BTreeSet::new();
    for a in a_hat {
        for c in copies_through(g, a, e).iter() {
            all.insert(c.to_subgraph());
        }
    }
    maximal_copies(g, all.into_iter().collect()).len()
}

/// Maximal `Â`-copies in `g`, per-edge counts and the non-trivial copies.
pub fn sg_decompose(g: &Graph, pair: &PairSpec, a_hat: &[Graph]) -> SgDecomposition {
    let mut all: BTreeSet<Subgraph> = BTreeSet::new();
    for a in a_hat {
        for c in enumerate_copies(g, a).iter() {
            all.insert(c.to_subgraph());
        }
    }
    let members = maximal_copies(g, all.into_iter().collect());
    let mut per_edge_count: BTreeMap<Edge, usize> = g.edges().iter().map(|&e| (e, 0)).collect();
    for s in &members {
        for e in &s.edges {
            *per_edge_count.get_mut(e).expect("member edge in host") += 1;
        }
    }
    let mut nontrivial_copies = Vec::new();
    if !members.is_empty() {
        for pattern in [&pair.h1, &pair.h2] {
            for t in enumerate_copies(g, pattern).iter() {
                let touched: BTreeSet<usize> = (0..members.len())
                    .filter(|&i| t.edges.iter().any(|e| members[i].edges.contains(e)))
                    .collect();
                if touched.len() >= 2 {
                    nontrivial_copies.push(t.clone());
                }
            }
        }
    }
    SgDecomposition { graph: g.clone(), members, per_edge_count, nontrivial_copies }
}

/// Colours every member of `𝒮_g` on its own and puts the pieces together.
///
/// Requires a sparse `Â`-graph. A member without a valid colouring is
/// reported as [`Error::UncolourableMember`].
pub fn a_colour(g: &Graph, pair: &PairSpec, a_hat: &[Graph]) -> Result<Coloring> {
    let dec = sg_decompose(g, pair, a_hat);
    a_colour_with(g, pair, &dec)
}

pub fn a_colour_with(g: &Graph, pair: &PairSpec, dec: &SgDecomposition) -> Result<Coloring> {
    if !dec.is_sparse_a_hat_graph() {
        return Err(Error::Precondition("graph is not a sparse Â-graph".into()));
    }
    let mut coloring = Coloring::uncoloured(g);
    for s in &dec.members {
        let (local, back) = s.to_graph();
        let out = has_valid_coloring(&local, pair, u64::MAX);
        match out.verdict {
            Verdict::Valid(c) => {
                for (i, e) in local.edges().iter().enumerate() {
                    let colour: Colour = c.colours[i].expect("oracle colourings are total");
                    coloring.set(e.map(|x| back[x as usize]), colour);
                }
            }
            _ => return Err(Error::UncolourableMember(crate::graph6::emit_graph6(&local))),
        }
    }
    Ok(coloring)
}
