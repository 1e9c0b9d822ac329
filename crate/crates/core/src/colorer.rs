//! The deletion-and-reinsertion colouring algorithm.
//!
//! Edges are deleted from a working copy `G'` until it is a sparse
//! `Â`-graph, which is coloured member by member. The deleted edges are then
//! put back in reverse order, each coloured blue, and every copy of `H₂`
//! that was pushed on the stack and comes back entirely blue has one edge
//! turned red.
//!
//! Copies of `H₁` in `G'` are the copies in `G` whose edges are all still
//! present, so they are tracked with a missing-edge counter per copy.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::density::PairSpec;
use crate::embed::{enumerate_copies, CopySet, Occurrence};
use crate::error::{Error, Result};
use crate::families::{a_colour_with, family_report, member_count_through, sg_decompose, SgDecomposition};
use crate::graph::{Edge, Graph};
use crate::oracle::{verify_coloring, Colour, Coloring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StackEntry {
    Edge(Edge),
    /// Index into the copies of `H₂` in the input graph.
    LCopy(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceAction {
    /// A tracked copy pushed because it runs through the edge being deleted.
    PushL,
    DeleteEdge,
    /// A tracked copy pushed because it is not starred in `G'`.
    DropL,
    AColour,
    ReinsertBlue,
    Recolour,
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub step: usize,
    pub action: TraceAction,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_edge")]
    pub edge: Option<Edge>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_edges")]
    pub l_copy: Option<Vec<Edge>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<Colour>,
}

fn ser_opt_edge<S: serde::Serializer>(e: &Option<Edge>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.serialize_str(&e.to_string()),
        None => s.serialize_none(),
    }
}

fn ser_opt_edges<S: serde::Serializer>(es: &Option<Vec<Edge>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match es {
        Some(es) => s.collect_seq(es.iter().map(|e| e.to_string())),
        None => s.serialize_none(),
    }
}

/// Writes a trace as JSON lines.
pub fn trace_to_jsonl(trace: &[TraceEvent]) -> String {
    let mut out = String::new();
    for ev in trace {
        out.push_str(&serde_json::to_string(ev).expect("trace events serialise"));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug)]
pub enum ColorerResult {
    Colored(Coloring),
    /// The first loop found neither an edge to delete nor a copy to drop.
    Stuck { residual: Graph, live_l: CopySet },
}

#[derive(Clone, Debug)]
pub struct ColorerOutcome {
    pub result: ColorerResult,
    pub trace: Vec<TraceEvent>,
    pub stack_peak: usize,
}

impl ColorerOutcome {
    pub fn is_colored(&self) -> bool {
        matches!(self.result, ColorerResult::Colored(_))
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.result {
            ColorerResult::Colored(c) => Some(c),
            ColorerResult::Stuck { .. } => None,
        }
    }

    pub fn residual(&self) -> Option<&Graph> {
        match &self.result {
            ColorerResult::Stuck { residual, .. } => Some(residual),
            ColorerResult::Colored(_) => None,
        }
    }
}

struct State<'a> {
    g: &'a Graph,
    pair: &'a PairSpec,
    a_hat: &'a [Graph],
    ls: CopySet,
    rs: CopySet,
    present: Vec<bool>,
    present_count: usize,
    /// Missing-edge counters of the copies of `H₁` and `H₂` in `G`.
    r_missing: Vec<usize>,
    l_missing: Vec<usize>,
    r_by_edge: Vec<Vec<usize>>,
    l_by_edge: Vec<Vec<usize>>,
    /// (L, R) pairs meeting in exactly one edge, grouped by that edge.
    pairs_by_edge: Vec<Vec<(usize, usize)>>,
    /// The same pairs grouped by L, as (edge index, R).
    pairs_by_l: Vec<Vec<(usize, usize)>>,
    tracked: Vec<bool>,
    tracked_count: usize,
    trace: Vec<TraceEvent>,
}

impl<'a> State<'a> {
    fn new(g: &'a Graph, pair: &'a PairSpec, a_hat: &'a [Graph]) -> State<'a> {
        let m = g.edge_count();
        let ls = enumerate_copies(g, &pair.h2);
        let rs = enumerate_copies(g, &pair.h1);
        let index = |c: &Occurrence| -> Vec<usize> { c.edges.iter().map(|&e| g.edge_index(e).expect("copy edge")).collect() };
        let mut r_by_edge = vec![Vec::new(); m];
        for (k, r) in rs.iter().enumerate() {
            for i in index(r) {
                r_by_edge[i].push(k);
            }
        }
        let mut l_by_edge = vec![Vec::new(); m];
        for (k, l) in ls.iter().enumerate() {
            for i in index(l) {
                l_by_edge[i].push(k);
            }
        }
        let mut pairs_by_edge = vec![Vec::new(); m];
        let mut pairs_by_l = vec![Vec::new(); ls.len()];
        for (li, l) in ls.iter().enumerate() {
            for i in index(l) {
                for &ri in &r_by_edge[i] {
                    if l.common_edges(&rs.copies[ri]) == 1 {
                        pairs_by_edge[i].push((li, ri));
                        pairs_by_l[li].push((i, ri));
                    }
                }
            }
        }
        let tracked_count = ls.len();
        State {
            g,
            pair,
            a_hat,
            r_missing: vec![0; rs.len()],
            l_missing: vec![0; ls.len()],
            tracked: vec![true; ls.len()],
            ls,
            rs,
            present: vec![true; m],
            present_count: m,
            r_by_edge,
            l_by_edge,
            pairs_by_edge,
            pairs_by_l,
            tracked_count,
            trace: Vec::new(),
        }
    }

    fn log(&mut self, action: TraceAction, edge: Option<Edge>, l: Option<usize>, color: Option<Colour>) {
        let l_copy = l.map(|k| self.ls.copies[k].edges.clone());
        self.trace.push(TraceEvent { step: self.trace.len(), action, edge, l_copy, color });
    }

    fn remove(&mut self, i: usize) {
        self.present[i] = false;
        self.present_count -= 1;
        for &k in &self.r_by_edge[i] {
            self.r_missing[k] += 1;
        }
        for &k in &self.l_by_edge[i] {
            self.l_missing[k] += 1;
        }
    }

    fn insert(&mut self, i: usize) {
        self.present[i] = true;
        self.present_count += 1;
        for &k in &self.r_by_edge[i] {
            self.r_missing[k] -= 1;
        }
        for &k in &self.l_by_edge[i] {
            self.l_missing[k] -= 1;
        }
    }

    fn residual(&self) -> Graph {
        let edges = self.g.edges().iter().zip(&self.present).filter(|(_, p)| **p).map(|(e, _)| *e);
        Graph::from_sorted(self.g.vertex_count(), edges.collect())
    }

    /// Is `G'` a sparse `Â`-graph? Returns the decomposition when it is.
    fn sparse_a_hat_graph(&self) -> Option<Option<SgDecomposition>> {
        if self.present_count == 0 {
            return Some(None);
        }
        if self.a_hat.is_empty() {
            // No members means every edge has |𝒮(e)| = 0.
            return None;
        }
        // Members lie in 𝒞, so each edge of an Â-graph is on copies of both patterns.
        for i in 0..self.present.len() {
            if self.present[i]
                && (!self.r_by_edge[i].iter().any(|&k| self.r_missing[k] == 0)
                    || !self.l_by_edge[i].iter().any(|&k| self.l_missing[k] == 0))
            {
                return None;
            }
        }
        let residual = self.residual();
        let lowest = self.present.iter().position(|&p| p).expect("non-empty residual");
        if member_count_through(&residual, self.a_hat, self.g.edges()[lowest]) != 1 {
            return None;
        }
        let dec = sg_decompose(&residual, self.pair, self.a_hat);
        dec.is_sparse_a_hat_graph().then_some(Some(dec))
    }

    /// Lowest edge of `G'` that is no unique (L, R) intersection with L tracked.
    fn deletable_edge(&self) -> Option<usize> {
        (0..self.present.len()).find(|&i| {
            self.present[i]
                && !self.pairs_by_edge[i].iter().any(|&(l, r)| self.tracked[l] && self.r_missing[r] == 0)
        })
    }

    /// Edge of `L` at which no copy of `H₁` in `G'` meets `L` alone, if any.
    fn unstarred_edge(&self, l: usize) -> Option<usize> {
        let mut edges: Vec<usize> =
            self.ls.copies[l].edges.iter().map(|&e| self.g.edge_index(e).expect("copy edge")).collect();
        edges.sort_unstable();
        edges.into_iter().find(|&i| !self.pairs_by_l[l].iter().any(|&(j, r)| j == i && self.r_missing[r] == 0))
    }

    fn invariant(&self, msg: String) -> Error {
        Error::Invariant(format!("{msg}\ntrace:\n{}", trace_to_jsonl(&self.trace)))
    }
}

/// Runs the colouring algorithm on `g`.
///
/// `a_hat` lists the small graphs that may be coloured directly; pass the
/// empty slice when the family is empty. `Err` is returned only when an
/// internal invariant fails, which indicates a bug.
pub fn asym_edge_col(g: &Graph, pair: &PairSpec, a_hat: &[Graph]) -> Result<ColorerOutcome> {
    let mut st = State::new(g, pair, a_hat);
    let mut stack: Vec<StackEntry> = Vec::new();
    let mut stack_peak = 0;
    let mut measure = st.present_count + st.tracked_count;

    let final_dec = loop {
        if let Some(dec) = st.sparse_a_hat_graph() {
            break dec;
        }
        if let Some(i) = st.deletable_edge() {
            let through: Vec<usize> = st.l_by_edge[i].iter().copied().filter(|&k| st.tracked[k]).collect();
            for k in through {
                st.tracked[k] = false;
                st.tracked_count -= 1;
                stack.push(StackEntry::LCopy(k));
                st.log(TraceAction::PushL, None, Some(k), None);
            }
            let e = g.edges()[i];
            stack.push(StackEntry::Edge(e));
            st.remove(i);
            st.log(TraceAction::DeleteEdge, Some(e), None, None);
        } else if let Some(k) = (0..st.ls.len()).find(|&k| st.tracked[k] && st.unstarred_edge(k).is_some()) {
            st.tracked[k] = false;
            st.tracked_count -= 1;
            stack.push(StackEntry::LCopy(k));
            st.log(TraceAction::DropL, None, Some(k), None);
        } else {
            st.log(TraceAction::Stuck, None, None, None);
            let live_l = CopySet {
                pattern: pair.h2.clone(),
                copies: (0..st.ls.len()).filter(|&k| st.tracked[k]).map(|k| st.ls.copies[k].clone()).collect(),
            };
            let residual = st.residual();
            return Ok(ColorerOutcome { result: ColorerResult::Stuck { residual, live_l }, trace: st.trace, stack_peak });
        }
        stack_peak = stack_peak.max(stack.len());
        let next = st.present_count + st.tracked_count;
        if next >= measure {
            return Err(st.invariant(format!("first loop did not shrink |E'| + |ℒ| ({measure} -> {next})")));
        }
        measure = next;
    };

    let mut colours: Vec<Option<Colour>> = vec![None; g.edge_count()];
    if let Some(dec) = final_dec {
        let local = a_colour_with(&dec.graph, pair, &dec)?;
        for (e, c) in local.graph.edges().iter().zip(&local.colours) {
            colours[g.edge_index(*e).expect("residual edge")] = *c;
        }
        st.log(TraceAction::AColour, None, None, None);
    }

    while let Some(entry) = stack.pop() {
        match entry {
            StackEntry::Edge(e) => {
                let i = g.edge_index(e).expect("stacked edge");
                st.insert(i);
                colours[i] = Some(Colour::Blue);
                st.log(TraceAction::ReinsertBlue, Some(e), None, Some(Colour::Blue));
            }
            StackEntry::LCopy(k) => {
                let idx: Vec<usize> = st.ls.copies[k].edges.iter().map(|&e| g.edge_index(e).expect("copy edge")).collect();
                if idx.iter().any(|&i| !st.present[i]) {
                    return Err(st.invariant(format!("popped copy {k} is not inside G'")));
                }
                if idx.iter().all(|&i| colours[i] == Some(Colour::Blue)) {
                    let Some(f) = st.unstarred_edge(k) else {
                        return Err(st.invariant(format!("no edge to recolour on copy {k}")));
                    };
                    colours[f] = Some(Colour::Red);
                    let fe = g.edges()[f];
                    st.log(TraceAction::Recolour, Some(fe), Some(k), Some(Colour::Red));
                    for &r in &st.r_by_edge[f] {
                        if st.r_missing[r] == 0 {
                            let all_red = st.rs.copies[r]
                                .edges
                                .iter()
                                .all(|&e| colours[g.edge_index(e).expect("copy edge")] == Some(Colour::Red));
                            if all_red {
                                return Err(st.invariant(format!("recolouring {fe} completed a red copy of H1")));
                            }
                        }
                    }
                }
            }
        }
    }

    let coloring = Coloring { graph: g.clone(), colours };
    if let Err(v) = verify_coloring(&coloring, pair) {
        return Err(st.invariant(format!("final colouring is invalid: {v}")));
    }
    Ok(ColorerOutcome { result: ColorerResult::Colored(coloring), trace: st.trace, stack_peak })
}

#[derive(Clone, Debug, Serialize)]
pub struct StuckReport {
    pub residual_edges: usize,
    pub in_c: bool,
    pub in_cstar: bool,
    pub is_a_hat_graph: bool,
    pub is_sparse: bool,
    pub live_l: usize,
}

/// Re-derives, from scratch, what a stuck run implies about its residual:
/// it is non-empty, lies in `𝒞*`, and is not a sparse `Â`-graph.
pub fn check_stuck_state(outcome: &ColorerOutcome, pair: &PairSpec, a_hat: &[Graph]) -> Result<StuckReport> {
    let ColorerResult::Stuck { residual, live_l } = &outcome.result else {
        return Err(Error::Precondition("the run produced a colouring, not a stuck state".into()));
    };
    let fam = family_report(residual, pair);
    let dec = sg_decompose(residual, pair, a_hat);
    let report = StuckReport {
        residual_edges: residual.edge_count(),
        in_c: fam.in_c,
        in_cstar: fam.in_cstar,
        is_a_hat_graph: dec.is_a_hat_graph(),
        is_sparse: dec.is_sparse(),
        live_l: live_l.len(),
    };
    let mut problems = Vec::new();
    if residual.edge_count() == 0 {
        problems.push("residual is empty".to_string());
    }
    if !fam.in_cstar {
        problems.push(format!("residual not in C*: edges {:?} lie on no starred copy", fam.cstar_failures));
    }
    if dec.is_sparse_a_hat_graph() {
        problems.push("residual is a sparse Â-graph".to_string());
    }
    let starred: BTreeMap<&Occurrence, ()> = fam.lstar_copies.iter().map(|c| (c, ())).collect();
    if let Some(l) = live_l.iter().find(|l| !starred.contains_key(l)) {
        problems.push(format!("live copy {:?} is not starred", l.edges));
    }
    if problems.is_empty() {
        Ok(report)
    } else {
        Err(Error::Invariant(format!("stuck state check failed: {}", problems.join("; "))))
    }
}
