//! Regular pairs: `H₁` is `ℓ₁`-regular on `v₁` vertices and `H₂` is
//! `ℓ₂`-regular on `v₂` vertices.
//!
//! Every vertex of a graph in `𝒞` lies on a copy of `H₁` and a copy of `H₂`
//! sharing exactly one edge, so its degree is at least `ℓ₁ + ℓ₂ − 1` and its
//! density at least `(ℓ₁ + ℓ₂ − 1)/2`. When that beats `m₂(H₁,H₂)` the small
//! family `Â` is empty for small enough `ε`. `(ℓ₁+ℓ₂−1)/2 > m₂(H₁,H₂)` is
//! equivalent to `f(v₁,v₂,ℓ₁,ℓ₂) > 0`, and the certifier below shows
//! `f > 0` by one of four routes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::canon::canonical_key;
use crate::density::{build_pair_spec, PairSpec};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::rational::{int, Rational};
use crate::report::ser_ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegularPairParams {
    pub v1: i64,
    pub l1: i64,
    pub v2: i64,
    pub l2: i64,
}

impl RegularPairParams {
    pub fn new(v1: i64, l1: i64, v2: i64, l2: i64) -> Result<RegularPairParams> {
        for (v, l, which) in [(v1, l1, 1), (v2, l2, 2)] {
            if l < 2 {
                return Err(Error::Config(format!("H{which} degree must be at least 2, got {l}")));
            }
            if l > v - 1 {
                return Err(Error::Config(format!("H{which}: degree {l} needs more than {v} vertices")));
            }
            if (v * l) % 2 != 0 {
                return Err(Error::Config(format!("H{which}: no {l}-regular graph on {v} vertices (odd degree sum)")));
            }
        }
        Ok(RegularPairParams { v1, l1, v2, l2 })
    }

    /// Parameters of a pair of concrete regular graphs.
    pub fn of_graphs(h1: &Graph, h2: &Graph) -> Result<RegularPairParams> {
        let deg = |g: &Graph, which| -> Result<i64> {
            let d = g.min_degree().unwrap_or(0);
            if g.vertices().any(|x| g.degree(x) != d) {
                return Err(Error::Config(format!("H{which} is not regular")));
            }
            Ok(d as i64)
        };
        RegularPairParams::new(h1.vertex_count() as i64, deg(h1, 1)?, h2.vertex_count() as i64, deg(h2, 2)?)
    }

    pub fn e1(&self) -> i64 {
        self.v1 * self.l1 / 2
    }

    pub fn e2(&self) -> i64 {
        self.v2 * self.l2 / 2
    }

    fn h1_clique(&self) -> bool {
        self.l1 == self.v1 - 1
    }

    fn h2_clique(&self) -> bool {
        self.l2 == self.v2 - 1
    }
}

/// `m₂` of a 2-balanced `ℓ`-regular graph on `v` vertices: `(vℓ/2 − 1)/(v − 2)`.
pub fn m2_regular(v: i64, l: i64) -> Rational {
    Rational::new(v * l - 2, 2 * (v - 2))
}

/// `v₁ℓ₁ / (2v₁ − 4 + (4v₂ − 8)/(v₂ℓ₂ − 2))`.
pub fn m2_pair_regular(p: &RegularPairParams) -> Rational {
    let denom = int(2 * p.v1 - 4) + Rational::new(4 * p.v2 - 8, p.v2 * p.l2 - 2);
    int(p.v1 * p.l1) / denom
}

/// `v₁v₂ℓ₂ − 2v₁ − 2v₂ℓ₁ − 2v₂ℓ₂ + 2v₂`.
pub fn f_poly(v1: i64, v2: i64, l1: i64, l2: i64) -> i64 {
    v1 * v2 * l2 - 2 * v1 - 2 * v2 * l1 - 2 * v2 * l2 + 2 * v2
}

/// `v₁v₂(ℓ₂ − 2) − 2v₁ + 4v₂ − 2v₂ℓ₂`, the lower bound for `f` when `ℓ₁ ≤ v₁ − 1`.
pub fn g_poly(v1: i64, v2: i64, l2: i64) -> i64 {
    v1 * v2 * (l2 - 2) - 2 * v1 + 4 * v2 - 2 * v2 * l2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Route {
    /// `v₁ ≥ 4, v₂ ≥ 5, ℓ₂ ≥ 3`: `f ≥ g ≥ g(4,5,3) = 2`.
    GeneralMonotone,
    /// `ℓ₂ = 2`: `f ≥ 2(v₂ − v₁)`.
    Case1Cycle,
    /// `v₁ = 3`: `f = v₂(ℓ₂ − 2) − 6`.
    Case2V1Is3,
    /// `v₂ ≤ 4`, so `H₂ = K₄`: `f = 10v₁ − 8(ℓ₁ + 2)`.
    Case3V2Le4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Exclusion {
    /// A clique and a cycle.
    CliqueAndCycle,
    /// `H₂` a cycle with `v₁ ≥ v₂`.
    CycleNotLonger,
    /// `(K₃, K₃,₃)`.
    TriangleAndK33,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rejection {
    /// Every matching exclusion is listed.
    Excluded(Vec<Exclusion>),
    HypothesesUnmet(String),
    /// Outside the excluded cases and the four routes, `f ≤ 0`.
    Uncovered { f: i64 },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::Excluded(list) => write!(out, "excluded: {list:?}"),
            Rejection::HypothesesUnmet(why) => write!(out, "hypotheses unmet: {why}"),
            Rejection::Uncovered { f } => write!(out, "not covered: f = {f}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmptinessCertificate {
    pub params: RegularPairParams,
    pub route: Route,
    pub f: i64,
    #[serde(serialize_with = "ser_ratio")]
    pub m2_pair: Rational,
    /// `(ℓ₁ + ℓ₂ − 1)/2 − m₂(H₁,H₂)`.
    #[serde(serialize_with = "ser_ratio")]
    pub margin: Rational,
    /// Half the margin; any `ε` below the margin works.
    #[serde(serialize_with = "ser_ratio")]
    pub epsilon_star: Rational,
}

pub fn exclusions(p: &RegularPairParams) -> Vec<Exclusion> {
    let mut out = Vec::new();
    let (c1, c2) = (p.l1 == 2, p.l2 == 2);
    if (p.h1_clique() && c2) || (c1 && p.h2_clique()) {
        out.push(Exclusion::CliqueAndCycle);
    }
    if c2 && p.v1 >= p.v2 {
        out.push(Exclusion::CycleNotLonger);
    }
    if (p.v1, p.l1, p.v2, p.l2) == (3, 2, 6, 3) {
        out.push(Exclusion::TriangleAndK33);
    }
    out
}

/// Certifies `Â(H₁,H₂,ε) = ∅` for small `ε` from the parameters alone,
/// assuming `H₁` is balanced with respect to `d₂(·,H₂)` and `H₂` is 2-balanced.
pub fn certify_emptiness(p: &RegularPairParams) -> std::result::Result<EmptinessCertificate, Rejection> {
    let ex = exclusions(p);
    if !ex.is_empty() {
        return Err(Rejection::Excluded(ex));
    }
    let (m1, m2) = (m2_regular(p.v1, p.l1), m2_regular(p.v2, p.l2));
    if m1 < m2 {
        return Err(Rejection::HypothesesUnmet(format!("m2(H1) = {m1} is below m2(H2) = {m2}")));
    }
    let RegularPairParams { v1, l1, v2, l2 } = *p;
    let f = f_poly(v1, v2, l1, l2);
    let (route, bound) = if v1 >= 4 && v2 >= 5 && l2 >= 3 {
        (Route::GeneralMonotone, g_poly(v1, v2, l2))
    } else if l2 == 2 {
        if l1 > v1 - 2 || v2 <= v1 {
            return Err(Rejection::HypothesesUnmet("cycle case needs a non-clique H1 on fewer vertices".into()));
        }
        (Route::Case1Cycle, 2 * (v2 - v1))
    } else if v1 == 3 {
        if v2 <= 5 {
            return Err(Rejection::HypothesesUnmet(format!("H2 on {v2} vertices with degree {l2} is denser than K3")));
        }
        (Route::Case2V1Is3, v2 * (l2 - 2) - 6)
    } else {
        // v₂ ≤ 4 and ℓ₂ ≥ 3 leave only K₄.
        if p.h1_clique() && v1 < 5 {
            return Err(Rejection::Uncovered { f });
        }
        (Route::Case3V2Le4, 10 * v1 - 8 * (l1 + 2))
    };
    assert!(f >= bound, "route {route:?} bound {bound} exceeds f = {f} for {p:?}");
    if f <= 0 {
        return Err(Rejection::Uncovered { f });
    }
    let m2_pair = m2_pair_regular(p);
    let margin = Rational::new(l1 + l2 - 1, 2) - m2_pair;
    assert!(margin > int(0), "f > 0 but the margin {margin} is not positive for {p:?}");
    Ok(EmptinessCertificate { params: *p, route, f, m2_pair, margin, epsilon_star: margin / 2 })
}

/// Certifies a pair of concrete graphs, checking the structural hypotheses
/// and that the closed form agrees with the general `m₂(H₁,H₂)`.
pub fn certify_graphs(h1: &Graph, h2: &Graph) -> Result<std::result::Result<EmptinessCertificate, Rejection>> {
    let p = RegularPairParams::of_graphs(h1, h2)?;
    let pair: PairSpec = match build_pair_spec(h1, h2, crate::density::default_epsilon()) {
        Ok(pair) => pair,
        Err(e) => return Ok(Err(Rejection::HypothesesUnmet(e.to_string()))),
    };
    if !pair.hypotheses.all_hold(pair.case) {
        return Ok(Err(Rejection::HypothesesUnmet(format!("{:?}", pair.hypotheses))));
    }
    let cert = certify_emptiness(&p);
    if let Ok(c) = &cert {
        if c.m2_pair != pair.m2_pair {
            return Err(Error::Invariant(format!("closed form {} differs from m2(H1,H2) = {}", c.m2_pair, pair.m2_pair)));
        }
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub holds: bool,
    /// A vertex of degree below `ℓ₁ + ℓ₂ − 1`, with its degree.
    pub low_vertex: Option<(Vertex, usize)>,
}

/// `δ(a) ≥ ℓ₁ + ℓ₂ − 1` and `d(a) ≥ (ℓ₁ + ℓ₂ − 1)/2`.
pub fn min_degree_bound_check(a: &Graph, p: &RegularPairParams) -> DegreeBound {
    let need = (p.l1 + p.l2 - 1) as usize;
    let low_vertex = a.vertices().map(|x| (x, a.degree(x))).find(|&(_, d)| d < need);
    let dense = a.vertex_count() == 0
        || Rational::new(a.edge_count() as i64, a.vertex_count() as i64) >= Rational::new(need as i64, 2);
    DegreeBound { holds: low_vertex.is_none() && dense, low_vertex }
}

/// All `d`-regular graphs on `n` vertices up to isomorphism, by
/// backtracking over the edge list with degree caps.
pub fn regular_graphs(n: usize, d: usize) -> Vec<Graph> {
    let pairs: Vec<Edge> = (0..n as Vertex).flat_map(|a| (a + 1..n as Vertex).map(move |b| Edge(a, b))).collect();
    let mut out = BTreeSet::new();
    let mut deg = vec![0usize; n];
    let mut chosen = Vec::new();

    fn rec(i: usize, pairs: &[Edge], d: usize, n: usize, deg: &mut [usize], chosen: &mut Vec<Edge>, out: &mut BTreeSet<Graph>) {
        if chosen.len() * 2 == n * d {
            if deg.iter().all(|&x| x == d) {
                let set: BTreeSet<Edge> = chosen.iter().copied().collect();
                out.insert(canonical_key(&Graph::from_edge_set(n, &set)));
            }
            return;
        }
        if i == pairs.len() {
            return;
        }
        let e = pairs[i];
        // Vertex e.0 gets no more chances after its last pair.
        let last_for_a = e.1 as usize == n - 1;
        if deg[e.0 as usize] < d && deg[e.1 as usize] < d {
            deg[e.0 as usize] += 1;
            deg[e.1 as usize] += 1;
            chosen.push(e);
            rec(i + 1, pairs, d, n, deg, chosen, out);
            chosen.pop();
            deg[e.0 as usize] -= 1;
            deg[e.1 as usize] -= 1;
        }
        if !(last_for_a && deg[e.0 as usize] < d) {
            rec(i + 1, pairs, d, n, deg, chosen, out);
        }
    }

    if n * d % 2 == 0 && d < n.max(1) {
        rec(0, &pairs, d, n, &mut deg, &mut chosen, &mut out);
    }
    out.into_iter().collect()
}
