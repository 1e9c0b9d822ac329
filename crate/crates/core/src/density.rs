//! Densities d, m, d₂, m₂, the asymmetric pair density, balancedness, λ and γ.
//!
//! Each measure depends only on (v, e) and never decreases when edges are
//! added on a fixed vertex set, so maxima over all subgraphs are maxima over
//! induced subgraphs. Small graphs are scanned exhaustively; larger ones go
//! through parametric maximum-closure (Dinkelbach) iterations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::max_closure;
use crate::graph::{Graph, Vertex};
use crate::rational::{int, rat, Rational};

/// Above this many vertices the flow-based maximisers are used.
const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Measure {
    D,
    D2,
    /// `d₂(·, H₂)` with the given `m₂(H₂)`.
    D2Asym(Rational),
}

pub fn d_value(v: usize, e: usize) -> Rational {
    if v == 0 {
        int(0)
    } else {
        rat(e as i64, v as i64)
    }
}

pub fn d2_value(v: usize, e: usize) -> Rational {
    if e >= 1 && v >= 3 {
        rat(e as i64 - 1, v as i64 - 2)
    } else if v == 2 && e == 1 {
        rat(1, 2)
    } else {
        int(0)
    }
}

/// `e / (v - 2 + 1/m2_h2)`, or 0 when `H₂` is empty (`m2_h2 = 0`) or `v < 2`.
pub fn d2_asym_value(v: usize, e: usize, m2_h2: Rational) -> Rational {
    if m2_h2 > int(0) && v >= 2 {
        int(e as i64) / (int(v as i64 - 2) + m2_h2.recip())
    } else {
        int(0)
    }
}

impl Measure {
    fn eval(self, v: usize, e: usize) -> Rational {
        match self {
            Measure::D => d_value(v, e),
            Measure::D2 => d2_value(v, e),
            Measure::D2Asym(m) => d2_asym_value(v, e, m),
        }
    }
}

/// Calls `f(vertices, e(S))` for every vertex subset `S`, including the empty one.
fn for_each_induced(g: &Graph, f: &mut dyn FnMut(&[Vertex], usize)) {
    assert!(g.vertex_count() <= 30, "exhaustive scan limited to 30 vertices");
    fn rec(g: &Graph, i: usize, chosen: &mut Vec<Vertex>, mask: u64, e: usize, f: &mut dyn FnMut(&[Vertex], usize)) {
        if i == g.vertex_count() {
            f(chosen, e);
            return;
        }
        rec(g, i + 1, chosen, mask, e, f);
        let gained = g.neighbors(i as Vertex).iter().filter(|&&w| mask >> w & 1 == 1).count();
        chosen.push(i as Vertex);
        rec(g, i + 1, chosen, mask | 1 << i, e + gained, f);
        chosen.pop();
    }
    rec(g, 0, &mut Vec::new(), 0, 0, f);
}

/// Largest value of the measure over induced subgraphs, with a witness.
/// Ties prefer more vertices, then the first subset met.
fn max_exhaustive(g: &Graph, m: Measure) -> (Rational, Vec<Vertex>) {
    let mut best = (int(0), Vec::new());
    for_each_induced(g, &mut |s, e| {
        let val = m.eval(s.len(), e);
        if val > best.0 || (val == best.0 && s.len() > best.1.len()) {
            best = (val, s.to_vec());
        }
    });
    best
}

fn mask_to_vertices(mask: &[bool]) -> Vec<Vertex> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as Vertex).collect()
}

fn edge_pairs(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.0 as usize, e.1 as usize)).collect()
}

fn count_inside(g: &Graph, s: &[Vertex]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    for &v in s {
        inside[v as usize] = true;
    }
    g.edges().iter().filter(|e| inside[e.0 as usize] && inside[e.1 as usize]).count()
}

/// Maximises `(e(S) - c0) / (|S| - c1)` over `S ⊇ forced` by Dinkelbach
/// iteration, starting from the known lower bound `start` (attained by
/// `start_set`, or a threshold to beat). Only sets with positive denominator
/// can beat a threshold, which the callers ensure via `forced`.
fn dinkelbach(
    g: &Graph,
    c0: Rational,
    c1: Rational,
    forced: &[usize],
    start: Rational,
    start_set: Vec<Vertex>,
) -> (Rational, Vec<Vertex>) {
    let pairs = edge_pairs(g);
    let mut t = start;
    let mut witness = start_set;
    loop {
        // value·L = L·e(S) − L·t·|S| + (−L·c0 + L·t·c1), L = den(t)·den(c0)·den(c1)
        let l = t.denom() * c0.denom() * c1.denom();
        let we = l;
        let lt = int(l) * t;
        let wv = lt.to_integer();
        let konst = (-(int(l) * c0) + lt * c1).to_integer();
        let (val, mask) = max_closure(g.vertex_count(), &pairs, we, wv, forced);
        if val + konst <= 0 {
            return (t, witness);
        }
        let s = mask_to_vertices(&mask);
        let e = count_inside(g, &s) as i64;
        t = (int(e) - c0) / (int(s.len() as i64) - c1);
        witness = s;
    }
}

fn max_by_flow(g: &Graph, m: Measure) -> (Rational, Vec<Vertex>) {
    let n = g.vertex_count();
    match m {
        Measure::D => {
            if g.edge_count() == 0 {
                return (int(0), g.vertices().collect());
            }
            let all: Vec<Vertex> = g.vertices().collect();
            let (t, _) = dinkelbach(g, int(0), int(0), &[], d_value(n, g.edge_count()), all);
            // The largest closure at the optimum is a canonical witness.
            let (_, mask) = max_closure(n, &edge_pairs(g), *t.denom(), *t.numer(), &[]);
            (t, mask_to_vertices(&mask))
        }
        Measure::D2 => {
            let Some(first) = g.edges().first() else { return (int(0), Vec::new()) };
            let mut best = (rat(1, 2), vec![first.0, first.1]);
            if n >= 3 {
                best = (d2_value(n, g.edge_count()).max(best.0), g.vertices().collect());
            }
            for e in g.edges() {
                let forced = [e.0 as usize, e.1 as usize];
                let cand = dinkelbach(g, int(1), int(2), &forced, best.0, best.1.clone());
                if cand.0 > best.0 {
                    best = cand;
                }
            }
            best
        }
        Measure::D2Asym(m2) => {
            if m2 <= int(0) || g.edge_count() == 0 {
                return (int(0), Vec::new());
            }
            let c1 = int(2) - m2.recip();
            let first = g.edges()[0];
            let mut best = (m2, vec![first.0, first.1]);
            for e in g.edges() {
                let forced = [e.0 as usize, e.1 as usize];
                let cand = dinkelbach(g, int(0), c1, &forced, best.0, best.1.clone());
                if cand.0 > best.0 {
                    best = cand;
                }
            }
            best
        }
    }
}

fn max_over_subgraphs(g: &Graph, m: Measure) -> (Rational, Vec<Vertex>) {
    if g.vertex_count() <= EXHAUSTIVE_LIMIT {
        max_exhaustive(g, m)
    } else {
        max_by_flow(g, m)
    }
}

/// Largest value over proper subgraphs `J ⊊ g`.
fn max_over_proper(g: &Graph, m: Measure) -> Rational {
    let n = g.vertex_count();
    let mut best = if g.edge_count() >= 1 { m.eval(n, g.edge_count() - 1) } else { int(0) };
    if n == 0 {
        return best;
    }
    if n <= EXHAUSTIVE_LIMIT {
        for_each_induced(g, &mut |s, e| {
            if s.len() < n {
                best = best.max(m.eval(s.len(), e));
            }
        });
    } else {
        for x in g.vertices() {
            let rest: Vec<Vertex> = g.vertices().filter(|&v| v != x).collect();
            best = best.max(max_by_flow(&g.induced(&rest), m).0);
        }
    }
    best
}

pub fn d_density(g: &Graph) -> Rational {
    d_value(g.vertex_count(), g.edge_count())
}

pub fn d2_density(g: &Graph) -> Rational {
    d2_value(g.vertex_count(), g.edge_count())
}

/// `m(g)` with the vertex set of a densest subgraph.
pub fn m_density(g: &Graph) -> (Rational, Vec<Vertex>) {
    max_over_subgraphs(g, Measure::D)
}

/// `m₂(g)` with the vertex set of a maximising induced subgraph.
pub fn m2_density(g: &Graph) -> (Rational, Vec<Vertex>) {
    max_over_subgraphs(g, Measure::D2)
}

pub fn d2_asym(g1: &Graph, h2: &Graph) -> Rational {
    d2_asym_value(g1.vertex_count(), g1.edge_count(), m2_density(h2).0)
}

/// `m₂(h1, h2)` with a maximising subgraph of `h1` (as a vertex set).
pub fn m2_asym(h1: &Graph, h2: &Graph) -> (Rational, Vec<Vertex>) {
    m2_asym_given(h1, m2_density(h2).0)
}

pub fn m2_asym_given(h1: &Graph, m2_h2: Rational) -> (Rational, Vec<Vertex>) {
    max_over_subgraphs(h1, Measure::D2Asym(m2_h2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Balance {
    Balanced,
    StrictlyBalanced,
    TwoBalanced,
    StrictlyTwoBalanced,
}

pub fn balancedness(g: &Graph, mode: Balance) -> bool {
    match mode {
        Balance::Balanced => d_density(g) == m_density(g).0,
        Balance::StrictlyBalanced => max_over_proper(g, Measure::D) < m_density(g).0,
        Balance::TwoBalanced => d2_density(g) == m2_density(g).0,
        Balance::StrictlyTwoBalanced => max_over_proper(g, Measure::D2) < m2_density(g).0,
    }
}

/// (Strict) balancedness of `h1` with respect to `d₂(·, h2)`.
pub fn asym_balancedness(h1: &Graph, h2: &Graph, strict: bool) -> bool {
    let m2_h2 = m2_density(h2).0;
    let top = m2_asym_given(h1, m2_h2).0;
    if strict {
        max_over_proper(h1, Measure::D2Asym(m2_h2)) < top
    } else {
        d2_asym_value(h1.vertex_count(), h1.edge_count(), m2_h2) == top
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile {
    #[serde(skip)]
    pub graph: Graph,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub d: Rational,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub m: Rational,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub d2: Rational,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub m2: Rational,
    pub witness_m: Vec<Vertex>,
    pub witness_m2: Vec<Vertex>,
}

pub fn profile(g: &Graph) -> DensityProfile {
    let (m, witness_m) = m_density(g);
    let (m2, witness_m2) = m2_density(g);
    DensityProfile { graph: g.clone(), d: d_density(g), m, d2: d2_density(g), m2, witness_m, witness_m2 }
}

/// `1/m − 1/(m + ε)`.
pub fn gamma(m2_pair: Rational, epsilon: Rational) -> Rational {
    m2_pair.recip() - (m2_pair + epsilon).recip()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairCase {
    /// `m₂(H₁) > m₂(H₂)`
    Strict,
    /// `m₂(H₁) = m₂(H₂)`
    Equal,
}

/// Which structural hypotheses on the pair hold. The numeric ones are
/// enforced by [`build_pair_spec`]; these are recorded, not enforced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub h2_strictly_two_balanced: bool,
    /// `H₁` strictly balanced w.r.t. `d₂(·, H₂)`; required in the strict case.
    pub h1_strictly_asym_balanced: bool,
    /// `H₁` strictly 2-balanced; required in the equal case.
    pub h1_strictly_two_balanced: bool,
}

impl Hypotheses {
    pub fn all_hold(&self, case: PairCase) -> bool {
        self.h2_strictly_two_balanced
            && match case {
                PairCase::Strict => self.h1_strictly_asym_balanced,
                PairCase::Equal => self.h1_strictly_two_balanced,
            }
    }
}

#[derive(Clone, Debug)]
pub struct PairSpec {
    pub h1: Graph,
    pub h2: Graph,
    pub epsilon: Rational,
    pub m2_h1: Rational,
    pub m2_h2: Rational,
    pub m2_pair: Rational,
    pub gamma: Rational,
    pub case: PairCase,
    pub hypotheses: Hypotheses,
}

pub fn default_epsilon() -> Rational {
    rat(1, 100)
}

pub fn build_pair_spec(h1: &Graph, h2: &Graph, epsilon: Rational) -> Result<PairSpec> {
    if h1.edge_count() == 0 || h2.edge_count() == 0 {
        return Err(Error::PairRejected("both graphs must have at least one edge".into()));
    }
    if epsilon <= int(0) {
        return Err(Error::PairRejected(format!("epsilon must be positive, got {epsilon}")));
    }
    let m2_h1 = m2_density(h1).0;
    let m2_h2 = m2_density(h2).0;
    if m2_h2 <= int(1) {
        return Err(Error::PairRejected(format!("m2(H2) = {m2_h2} must exceed 1")));
    }
    if m2_h1 < m2_h2 {
        return Err(Error::PairRejected(format!("m2(H1) = {m2_h1} is below m2(H2) = {m2_h2}")));
    }
    let m2_pair = m2_asym_given(h1, m2_h2).0;
    let case = if m2_h1 > m2_h2 { PairCase::Strict } else { PairCase::Equal };
    let hypotheses = Hypotheses {
        h2_strictly_two_balanced: balancedness(h2, Balance::StrictlyTwoBalanced),
        h1_strictly_asym_balanced: asym_balancedness(h1, h2, true),
        h1_strictly_two_balanced: balancedness(h1, Balance::StrictlyTwoBalanced),
    };
    let gamma = gamma(m2_pair, epsilon);
    Ok(PairSpec { h1: h1.clone(), h2: h2.clone(), epsilon, m2_h1, m2_h2, m2_pair, gamma, case, hypotheses })
}

impl PairSpec {
    /// `λ` for a graph with `v` vertices and `e` edges.
    pub fn lambda_of(&self, v: usize, e: usize) -> Rational {
        int(v as i64) - int(e as i64) / self.m2_pair
    }

    pub fn lambda(&self, f: &Graph) -> Rational {
        self.lambda_of(f.vertex_count(), f.edge_count())
    }

    pub fn e1(&self) -> usize {
        self.h1.edge_count()
    }

    pub fn e2(&self) -> usize {
        self.h2.edge_count()
    }

    pub fn v1(&self) -> usize {
        self.h1.vertex_count()
    }

    pub fn v2(&self) -> usize {
        self.h2.vertex_count()
    }
}

/// `λ(F) = v(F) − e(F)/m₂(H₁,H₂)`.
pub fn lambda(f: &Graph, pair: &PairSpec) -> Rational {
    pair.lambda(f)
}

/// Minimum of λ over all subgraphs of `f`, with the largest minimising vertex set.
///
/// The largest minimiser is unique (minimisers are closed under union), so it
/// is determined up to isomorphism by `f` alone.
pub fn min_lambda(f: &Graph, m2_pair: Rational) -> (Rational, Vec<Vertex>) {
    // a·λ(S) = a|S| − b·e(S) for m₂ = a/b.
    let (a, b) = (*m2_pair.numer(), *m2_pair.denom());
    let (val, mask) = max_closure(f.vertex_count(), &edge_pairs(f), b, a, &[]);
    (rat(-val, a), mask_to_vertices(&mask))
}
