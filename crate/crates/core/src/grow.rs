//! The growth procedures run on a stuck residual `G'`: starting from one
//! copy of `H₁`, repeatedly attach copies of `H₁`/`H₂` found in `G'` and
//! track `λ` after every step.
//!
//! `grow` is the procedure for `m₂(H₁) > m₂(H₂)` (attach a starred copy of
//! `H₂` with its pendant copies of `H₁`), `grow_alt` the one for
//! `m₂(H₁) = m₂(H₂)` (attach a single copy of either graph). Every "any"
//! choice is resolved by taking the least candidate by sorted edge list,
//! except the anchor edge, which is chosen through the canonical form so
//! that it depends on `F` only up to isomorphism.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::canon::canonical_form;
use crate::density::{min_lambda, PairSpec};
use crate::embed::{enumerate_copies, CopySet, Occurrence};
use crate::error::{Error, Result};
use crate::families::{family_report, lstar_from, sg_decompose, unique_pair_edges};
use crate::graph::{Edge, Graph, Subgraph, Vertex};
use crate::rational::Rational;
use crate::report::ser_ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowVariant {
    Grow,
    GrowAlt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    SpecialCase1,
    SpecialCase2,
    AttachR,
    ExtendL,
    ExtendAlt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegenerateType {
    /// A copy of `H₁` outside `F` met it in two or more vertices.
    Type1,
    /// The copy of `H₂` or one of its pendant copies overlapped beyond its anchor.
    Type2,
    /// The single attached copy overlapped beyond the anchor edge.
    Alt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Degeneracy {
    NonDegenerate,
    Degenerate(DegenerateType),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    L,
    R,
}

/// One copy added during a step, with the vertices it shared with the
/// graph built so far at the moment it was added.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub role: Role,
    pub copy: Occurrence,
    pub anchor: Option<Edge>,
    pub overlap: Vec<Vertex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub kind: StepKind,
    pub anchor: Option<Edge>,
    pub attachments: Vec<Attachment>,
    pub degeneracy: Degeneracy,
    #[serde(serialize_with = "ser_ratio")]
    pub lambda_before: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub lambda_after: Rational,
    pub added_vertices: usize,
    pub added_edges: usize,
}

impl StepRecord {
    pub fn is_degenerate(&self) -> bool {
        matches!(self.degeneracy, Degeneracy::Degenerate(_))
    }

    pub fn is_loop_step(&self) -> bool {
        !matches!(self.kind, StepKind::SpecialCase1 | StepKind::SpecialCase2)
    }

    /// The JSON-lines form used by trace files.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({
            "i": self.index,
            "kind": self.kind,
            "degenerate": self.is_degenerate(),
            "lambda_before": crate::rational::fmt_ratio(&self.lambda_before),
            "lambda_after": crate::rational::fmt_ratio(&self.lambda_after),
            "v_added": self.added_vertices,
            "e_added": self.added_edges,
        })
        .to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowOutcome {
    /// The iteration cap was reached.
    ReturnedFi,
    /// Some subgraph of `F_i` reached `λ ≤ −γ`.
    ReturnedMinimisingSubgraph,
    SpecialReturn,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowTrace {
    pub variant: GrowVariant,
    pub steps: Vec<StepRecord>,
    pub outcome: GrowOutcome,
    /// The seed copy `F₀` (absent for special-case returns).
    pub seed: Option<Occurrence>,
    pub iteration_cap: usize,
    /// `F_i` when the loop stopped, before any minimising-subgraph step.
    #[serde(skip)]
    pub last: Subgraph,
    /// The returned graph, in host labels.
    #[serde(skip)]
    pub result: Subgraph,
}

impl GrowTrace {
    pub fn to_jsonl(&self) -> String {
        self.steps.iter().map(|s| s.to_json_line() + "\n").collect()
    }

    pub fn degenerate_count(&self) -> usize {
        self.steps.iter().filter(|s| s.is_loop_step() && s.is_degenerate()).count()
    }

    /// Smallest λ drop over degenerate loop steps.
    pub fn min_degenerate_drop(&self) -> Option<Rational> {
        self.steps
            .iter()
            .filter(|s| s.is_loop_step() && s.is_degenerate())
            .map(|s| s.lambda_before - s.lambda_after)
            .min()
    }
}

#[derive(Clone, Debug, Default)]
pub struct GrowOptions {
    /// Overrides `⌈ln n⌉` for the number of loop iterations.
    pub iteration_cap: Option<usize>,
}

/// `⌈ln n⌉`, the loop bound `i < ln n` in integer form.
pub fn default_iteration_cap(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (n as f64).ln().ceil() as usize
    }
}

/// An edge of `f` eligible for extension, chosen canonically.
///
/// `Grow`: an edge on no starred copy of `H₂` in `f`. `GrowAlt`: an edge that
/// is not the unique common edge of a copy of `H₂` and one of `H₁` in `f`.
/// `None` means `f ∈ 𝒞*` resp. `f ∈ 𝒞`.
pub fn eligible_edge(f: &Graph, pair: &PairSpec, variant: GrowVariant) -> Option<Edge> {
    let ls = enumerate_copies(f, &pair.h2);
    let rs = enumerate_copies(f, &pair.h1);
    let covered: BTreeSet<Edge> = match variant {
        GrowVariant::Grow => lstar_from(&ls, &rs).iter().flat_map(|l| l.edges.iter().copied()).collect(),
        GrowVariant::GrowAlt => unique_pair_edges(&ls, &rs),
    };
    let (_, label) = canonical_form(f);
    f.edges()
        .iter()
        .copied()
        .filter(|e| !covered.contains(e))
        .min_by_key(|e| e.map(|x| label[x as usize]))
}

/// The largest subgraph of `f` with minimum `λ`.
///
/// `λ` falls when edges are added on a fixed vertex set, so minimisers are
/// induced, and the union of two minimisers is again one. The largest is
/// therefore unique, and determined by `f` up to isomorphism. Returned as the
/// induced subgraph on those vertices, keeping `f`'s labels.
pub fn minimising_subgraph(f: &Graph, pair: &PairSpec) -> Subgraph {
    let (_, vs) = min_lambda(f, pair.m2_pair);
    let set: BTreeSet<Vertex> = vs.iter().copied().collect();
    let edges = f.edges().iter().copied().filter(|e| set.contains(&e.0) && set.contains(&e.1));
    Subgraph::from_parts(set.iter().copied(), edges)
}

fn overlap(f: &Subgraph, c: &Occurrence) -> Vec<Vertex> {
    c.vertices.iter().copied().filter(|v| f.vertices.contains(v)).collect()
}

fn is_exactly(overlap: &[Vertex], e: Edge) -> bool {
    overlap.len() == 2 && overlap.contains(&e.0) && overlap.contains(&e.1)
}

fn inside(f: &Subgraph, c: &Occurrence) -> bool {
    c.edges.iter().all(|e| f.edges.contains(e))
}

/// Classifies a loop step from its attachments.
pub fn classify_iteration(step: &StepRecord) -> Degeneracy {
    let clean = |a: &Attachment| a.anchor.is_some_and(|e| is_exactly(&a.overlap, e));
    match step.kind {
        StepKind::AttachR => Degeneracy::Degenerate(DegenerateType::Type1),
        StepKind::ExtendL => {
            if step.attachments.iter().all(clean) {
                Degeneracy::NonDegenerate
            } else {
                Degeneracy::Degenerate(DegenerateType::Type2)
            }
        }
        StepKind::ExtendAlt => {
            if step.attachments.iter().all(clean) {
                Degeneracy::NonDegenerate
            } else {
                Degeneracy::Degenerate(DegenerateType::Alt)
            }
        }
        StepKind::SpecialCase1 | StepKind::SpecialCase2 => Degeneracy::NonDegenerate,
    }
}

/// Copies of `H₁` and `H₂` in a fixed host, with the starred ones.
pub struct HostCopies {
    pub ls: CopySet,
    pub rs: CopySet,
    pub lstar: CopySet,
}

impl HostCopies {
    pub fn new(host: &Graph, pair: &PairSpec) -> HostCopies {
        let ls = enumerate_copies(host, &pair.h2);
        let rs = enumerate_copies(host, &pair.h1);
        let lstar = lstar_from(&ls, &rs);
        HostCopies { ls, rs, lstar }
    }
}

/// One extension by a starred copy of `H₂` through `e` and a copy of `H₁`
/// at each of its new edges. Returns the attachments in the order added.
pub fn extend_l(f: &Subgraph, e: Edge, copies: &HostCopies) -> Result<(Subgraph, Vec<Attachment>)> {
    let l = copies
        .lstar
        .iter()
        .find(|l| l.contains_edge(e))
        .ok_or_else(|| Error::Precondition(format!("no starred copy of H2 through {e}")))?;
    let mut atts = vec![Attachment { role: Role::L, copy: l.clone(), anchor: Some(e), overlap: overlap(f, l) }];
    let mut out = f.union(&l.to_subgraph());
    for &e2 in l.edges.iter().filter(|x| !f.edges.contains(x)) {
        let r = copies
            .rs
            .iter()
            .find(|r| r.meets_only_at(l, e2))
            .ok_or_else(|| Error::Precondition(format!("no copy of H1 meets the attached copy only at {e2}")))?;
        atts.push(Attachment { role: Role::R, copy: r.clone(), anchor: Some(e2), overlap: overlap(&out, r) });
        out.union_with(&r.to_subgraph());
    }
    Ok((out, atts))
}

/// One extension in the equal case: the least (L, R) pair meeting only at
/// `e`; attach `L` unless it is already inside `F`, else attach `R`.
pub fn extend_alt(f: &Subgraph, e: Edge, copies: &HostCopies) -> Result<(Subgraph, Attachment)> {
    for l in copies.ls.iter().filter(|l| l.contains_edge(e)) {
        if let Some(r) = copies.rs.iter().find(|r| r.meets_only_at(l, e)) {
            let (role, c) = if !inside(f, l) { (Role::L, l) } else { (Role::R, r) };
            let att = Attachment { role, copy: c.clone(), anchor: Some(e), overlap: overlap(f, c) };
            return Ok((f.union(&c.to_subgraph()), att));
        }
    }
    Err(Error::Precondition(format!("no pair of copies meets only at {e}")))
}

fn step_record(
    index: usize,
    kind: StepKind,
    anchor: Option<Edge>,
    attachments: Vec<Attachment>,
    before: &Subgraph,
    after: &Subgraph,
    pair: &PairSpec,
) -> StepRecord {
    let mut s = StepRecord {
        index,
        kind,
        anchor,
        attachments,
        degeneracy: Degeneracy::NonDegenerate,
        lambda_before: pair.lambda_of(before.v(), before.e()),
        lambda_after: pair.lambda_of(after.v(), after.e()),
        added_vertices: after.v() - before.v(),
        added_edges: after.e() - before.e(),
    };
    s.degeneracy = classify_iteration(&s);
    s
}

fn sub_to_graph(s: &Subgraph) -> (Graph, Vec<Vertex>) {
    s.to_graph()
}

/// Runs `grow` (`GrowVariant::Grow`) or `grow_alt` on a stuck residual.
pub fn run_grow(host: &Graph, pair: &PairSpec, a_hat: &[Graph], variant: GrowVariant, opts: &GrowOptions) -> Result<GrowTrace> {
    let fam = family_report(host, pair);
    let ok = match variant {
        GrowVariant::Grow => fam.in_cstar,
        GrowVariant::GrowAlt => fam.in_c,
    };
    if host.edge_count() == 0 || !ok {
        return Err(Error::Precondition(format!(
            "host must be a non-empty member of {}",
            if variant == GrowVariant::Grow { "C*" } else { "C" }
        )));
    }
    let dec = sg_decompose(host, pair, a_hat);
    if dec.is_sparse_a_hat_graph() {
        return Err(Error::Precondition("host is a sparse Â-graph".into()));
    }
    let cap = opts.iteration_cap.unwrap_or_else(|| default_iteration_cap(host.vertex_count()));
    let special = |kind: StepKind, base: Subgraph, result: Subgraph| -> GrowTrace {
        let step = step_record(0, kind, None, Vec::new(), &base, &result, pair);
        GrowTrace {
            variant,
            steps: vec![step],
            outcome: GrowOutcome::SpecialReturn,
            seed: None,
            iteration_cap: cap,
            last: result.clone(),
            result,
        }
    };

    if dec.is_a_hat_graph() {
        let t = dec.nontrivial_copies.iter().min().expect("a non-sparse Â-graph has a non-trivial copy");
        let mut out = t.to_subgraph();
        for &e in &t.edges {
            for i in dec.members_through(e) {
                out.union_with(&dec.members[i]);
            }
        }
        return Ok(special(StepKind::SpecialCase1, t.to_subgraph(), out));
    }
    if let Some(&e) = host.edges().iter().find(|e| dec.per_edge_count[e] >= 2) {
        let through = dec.members_through(e);
        let (s1, s2) = (&dec.members[through[0]], &dec.members[through[1]]);
        return Ok(special(StepKind::SpecialCase2, s1.clone(), s1.union(s2)));
    }

    let copies = HostCopies::new(host, pair);
    let e0 = *host.edges().iter().find(|e| dec.per_edge_count[e] == 0).expect("some edge is on no member");
    let seed = copies
        .rs
        .iter()
        .find(|r| r.contains_edge(e0))
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("no copy of H1 through {e0}")))?;
    let mut f = seed.to_subgraph();
    let mut steps = Vec::new();
    let mut i = 0;
    let guard_fails = |f: &Subgraph| -> bool {
        let (g, _) = sub_to_graph(f);
        min_lambda(&g, pair.m2_pair).0 <= -pair.gamma
    };
    while i < cap && !guard_fails(&f) {
        let (next, step) = match variant {
            GrowVariant::Grow => {
                let r = copies.rs.iter().find(|r| !inside(&f, r) && overlap(&f, r).len() >= 2);
                if let Some(r) = r {
                    let att = Attachment { role: Role::R, copy: r.clone(), anchor: None, overlap: overlap(&f, r) };
                    let next = f.union(&r.to_subgraph());
                    let step = step_record(i, StepKind::AttachR, None, vec![att], &f, &next, pair);
                    (next, step)
                } else {
                    let e = eligible_in(&f, pair, variant)?;
                    let (next, atts) = extend_l(&f, e, &copies)?;
                    let step = step_record(i, StepKind::ExtendL, Some(e), atts, &f, &next, pair);
                    (next, step)
                }
            }
            GrowVariant::GrowAlt => {
                let e = eligible_in(&f, pair, variant)?;
                let (next, att) = extend_alt(&f, e, &copies)?;
                let step = step_record(i, StepKind::ExtendAlt, Some(e), vec![att], &f, &next, pair);
                (next, step)
            }
        };
        if step.added_edges == 0 {
            return Err(Error::Invariant(format!("iteration {i} added no edges")));
        }
        steps.push(step);
        f = next;
        i += 1;
    }
    let (outcome, result) = if i >= cap {
        (GrowOutcome::ReturnedFi, f.clone())
    } else {
        let (g, back) = sub_to_graph(&f);
        let m = minimising_subgraph(&g, pair);
        let lifted = Subgraph::from_parts(
            m.vertices.iter().map(|&v| back[v as usize]),
            m.edges.iter().map(|e| e.map(|x| back[x as usize])),
        );
        (GrowOutcome::ReturnedMinimisingSubgraph, lifted)
    };
    Ok(GrowTrace { variant, steps, outcome, seed: Some(seed), iteration_cap: cap, last: f, result })
}

fn eligible_in(f: &Subgraph, pair: &PairSpec, variant: GrowVariant) -> Result<Edge> {
    let (g, back) = sub_to_graph(f);
    eligible_edge(&g, pair, variant)
        .map(|e| e.map(|x| back[x as usize]))
        .ok_or_else(|| Error::Invariant("no edge of F is eligible for extension".into()))
}

pub fn grow(host: &Graph, pair: &PairSpec, a_hat: &[Graph]) -> Result<GrowTrace> {
    run_grow(host, pair, a_hat, GrowVariant::Grow, &GrowOptions::default())
}

pub fn grow_alt(host: &Graph, pair: &PairSpec, a_hat: &[Graph]) -> Result<GrowTrace> {
    run_grow(host, pair, a_hat, GrowVariant::GrowAlt, &GrowOptions::default())
}

/// The variant matching the pair: `grow` when `m₂(H₁) > m₂(H₂)`, else `grow_alt`.
pub fn variant_for(pair: &PairSpec) -> GrowVariant {
    match pair.case {
        crate::density::PairCase::Strict => GrowVariant::Grow,
        crate::density::PairCase::Equal => GrowVariant::GrowAlt,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceViolation {
    pub step: usize,
    pub message: String,
}

/// Checks a trace against the λ bookkeeping: loop steps add edges,
/// non-degenerate steps keep `λ` and add exactly one structure's worth of
/// vertices and edges, degenerate steps lower `λ`, and the seed has
/// `λ(F₀) = 2 − 1/m₂(H₂)`.
pub fn audit_trace(trace: &GrowTrace, pair: &PairSpec) -> Vec<TraceViolation> {
    let mut out = Vec::new();
    let mut bad = |step: usize, message: String| out.push(TraceViolation { step, message });
    if let Some(seed) = &trace.seed {
        let l0 = pair.lambda_of(seed.vertices.len(), seed.edges.len());
        let want = Rational::from_integer(2) - pair.m2_h2.recip();
        if l0 != want {
            bad(0, format!("lambda(F0) = {l0}, expected {want}"));
        }
    }
    let (v1, e1, v2, e2) = (pair.v1(), pair.e1(), pair.v2(), pair.e2());
    for s in trace.steps.iter().filter(|s| s.is_loop_step()) {
        if s.added_edges == 0 {
            bad(s.index, "no edges added".into());
        }
        if s.degeneracy != classify_iteration(s) {
            bad(s.index, "recorded degeneracy disagrees with reclassification".into());
        }
        if s.is_degenerate() {
            if s.lambda_after >= s.lambda_before {
                bad(s.index, format!("degenerate step: lambda {} -> {}", s.lambda_before, s.lambda_after));
            }
        } else {
            if s.lambda_after != s.lambda_before {
                bad(s.index, format!("non-degenerate step: lambda {} -> {}", s.lambda_before, s.lambda_after));
            }
            let expected = match (s.kind, s.attachments.first().map(|a| a.role)) {
                (StepKind::ExtendL, _) => Some(((v2 - 2) + (e2 - 1) * (v1 - 2), (e2 - 1) + (e2 - 1) * (e1 - 1))),
                (StepKind::ExtendAlt, Some(Role::L)) => Some((v2 - 2, e2 - 1)),
                (StepKind::ExtendAlt, Some(Role::R)) => Some((v1 - 2, e1 - 1)),
                _ => None,
            };
            if let Some((dv, de)) = expected {
                if (s.added_vertices, s.added_edges) != (dv, de) {
                    bad(
                        s.index,
                        format!("non-degenerate step added ({}, {}), expected ({dv}, {de})", s.added_vertices, s.added_edges),
                    );
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::build_pair_spec;
    use crate::rational::rat;

    fn k4c4() -> PairSpec {
        build_pair_spec(&Graph::complete(4), &Graph::cycle(4), rat(1, 100)).unwrap()
    }

    #[test]
    fn k4_has_an_eligible_edge_for_k4_c4() {
        assert!(eligible_edge(&Graph::complete(4), &k4c4(), GrowVariant::Grow).is_some());
    }

    #[test]
    fn eligible_edge_follows_isomorphisms() {
        let p = k4c4();
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 4), (4, 0)]).unwrap();
        let perm = [3, 0, 4, 1, 2];
        let h = g.permuted(&perm);
        let a = eligible_edge(&g, &p, GrowVariant::Grow).unwrap();
        let b = eligible_edge(&h, &p, GrowVariant::Grow).unwrap();
        // Some automorphism-equivalent edge: compare canonical images.
        let (_, la) = canonical_form(&g);
        let (_, lb) = canonical_form(&h);
        assert_eq!(a.map(|x| la[x as usize]), b.map(|x| lb[x as usize]));
    }

    #[test]
    fn minimising_subgraph_of_empty_graph_is_empty() {
        let m = minimising_subgraph(&Graph::empty(3), &k4c4());
        assert_eq!(m.e(), 0);
    }

    #[test]
    fn grow_on_a_dense_host() {
        let p = k4c4();
        let host = Graph::complete(7);
        let t = grow(&host, &p, &[]).unwrap();
        assert!(!t.steps.is_empty());
        assert!(audit_trace(&t, &p).is_empty(), "{:?}", audit_trace(&t, &p));
    }

    #[test]
    fn json_line_schema() {
        let p = k4c4();
        let t = grow(&Graph::complete(7), &p, &[]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&t.steps[0].to_json_line()).unwrap();
        for key in ["i", "kind", "degenerate", "lambda_before", "lambda_after", "v_added", "e_added"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v["lambda_before"].as_str().unwrap().contains('/'));
    }
}
