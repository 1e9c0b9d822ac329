//! Red/blue colourings: the independent checker and the exhaustive search
//! that decides whether a valid colouring exists at all.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::density::PairSpec;
use crate::embed::{enumerate_copies, Occurrence};
use crate::graph::{Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Red,
    Blue,
}

/// A partial red/blue assignment, indexed like `graph.edges()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub graph: Graph,
    pub colours: Vec<Option<Colour>>,
}

impl Coloring {
    pub fn uncoloured(g: &Graph) -> Coloring {
        Coloring { graph: g.clone(), colours: vec![None; g.edge_count()] }
    }

    pub fn get(&self, e: Edge) -> Option<Colour> {
        self.graph.edge_index(e).and_then(|i| self.colours[i])
    }

    /// Panics if `e` is not an edge of the graph.
    pub fn set(&mut self, e: Edge, c: Colour) {
        let i = self.graph.edge_index(e).unwrap_or_else(|| panic!("{e} is not an edge"));
        self.colours[i] = Some(c);
    }

    pub fn is_total(&self) -> bool {
        self.colours.iter().all(Option::is_some)
    }

    pub fn edges_of(&self, c: Colour) -> Vec<Edge> {
        self.graph
            .edges()
            .iter()
            .zip(&self.colours)
            .filter(|(_, x)| **x == Some(c))
            .map(|(e, _)| *e)
            .collect()
    }

    pub fn as_map(&self) -> BTreeMap<Edge, Option<Colour>> {
        self.graph.edges().iter().copied().zip(self.colours.iter().copied()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Uncoloured(Vec<Edge>),
    RedH1(Occurrence),
    BlueH2(Occurrence),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let list = |es: &[Edge]| es.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Violation::Uncoloured(es) => write!(f, "uncoloured edges {}", list(es)),
            Violation::RedH1(c) => write!(f, "red copy of H1 on {}", list(&c.edges)),
            Violation::BlueH2(c) => write!(f, "blue copy of H2 on {}", list(&c.edges)),
        }
    }
}

/// Checks a total colouring by enumerating copies in each colour class.
pub fn verify_coloring(c: &Coloring, pair: &PairSpec) -> Result<(), Violation> {
    let missing: Vec<Edge> =
        c.graph.edges().iter().zip(&c.colours).filter(|(_, x)| x.is_none()).map(|(e, _)| *e).collect();
    if !missing.is_empty() {
        return Err(Violation::Uncoloured(missing));
    }
    let n = c.graph.vertex_count();
    let red = Graph::from_edges(n, c.edges_of(Colour::Red).into_iter().map(|e| (e.0, e.1))).expect("subgraph");
    if let Some(r) = enumerate_copies(&red, &pair.h1).copies.into_iter().next() {
        return Err(Violation::RedH1(r));
    }
    let blue = Graph::from_edges(n, c.edges_of(Colour::Blue).into_iter().map(|e| (e.0, e.1))).expect("subgraph");
    if let Some(l) = enumerate_copies(&blue, &pair.h2).copies.into_iter().next() {
        return Err(Violation::BlueH2(l));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Coloring),
    /// The whole search space was exhausted: `g → (H₁, H₂)`.
    Invalid,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub verdict: Verdict,
    pub nodes_expanded: u64,
}

/// One "not monochromatic" constraint: a copy of `H₁` (must not be all red)
/// or of `H₂` (must not be all blue).
struct Constraint {
    edges: Vec<usize>,
    bad: Colour,
    bad_count: usize,
    good_count: usize,
}

struct Search {
    constraints: Vec<Constraint>,
    by_edge: Vec<Vec<usize>>,
    colour: Vec<Option<Colour>>,
    trail: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Done,
    Conflict,
}

fn flip(c: Colour) -> Colour {
    match c {
        Colour::Red => Colour::Blue,
        Colour::Blue => Colour::Red,
    }
}

impl Search {
    /// Assigns and propagates. On conflict the trail still holds every
    /// assignment made, so the caller can undo to its mark.
    fn assign(&mut self, e: usize, c: Colour) -> Step {
        let mut queue = vec![(e, c)];
        while let Some((e, c)) = queue.pop() {
            match self.colour[e] {
                Some(old) if old == c => continue,
                Some(_) => return Step::Conflict,
                None => {}
            }
            self.colour[e] = Some(c);
            self.trail.push(e);
            // Counters are updated for every constraint before reporting a
            // conflict, so that `undo_to` stays exact.
            let mut conflict = false;
            for k in 0..self.by_edge[e].len() {
                let ci = self.by_edge[e][k];
                let con = &mut self.constraints[ci];
                if con.bad == c {
                    con.bad_count += 1;
                } else {
                    con.good_count += 1;
                }
                if con.good_count == 0 {
                    if con.bad_count == con.edges.len() {
                        conflict = true;
                    } else if con.bad_count + 1 == con.edges.len() {
                        let last = con.edges.iter().copied().find(|&x| self.colour[x].is_none());
                        if let Some(x) = last {
                            queue.push((x, flip(con.bad)));
                        }
                    }
                }
            }
            if conflict {
                return Step::Conflict;
            }
        }
        Step::Done
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("trail longer than mark");
            let c = self.colour[e].take().expect("trail entries are coloured");
            for &ci in &self.by_edge[e] {
                let con = &mut self.constraints[ci];
                if con.bad == c {
                    con.bad_count -= 1;
                } else {
                    con.good_count -= 1;
                }
            }
        }
    }

    /// The uncoloured edge in the most live constraints, preferring tight ones.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for e in 0..self.colour.len() {
            if self.colour[e].is_some() {
                continue;
            }
            let mut score = 0;
            for &ci in &self.by_edge[e] {
                let con = &self.constraints[ci];
                if con.good_count == 0 {
                    score += 1 + con.bad_count;
                }
            }
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, e));
            }
        }
        best.map(|(_, e)| e)
    }

    /// Returns Some(true) on success, Some(false) when exhausted, None on budget.
    fn solve(&mut self) -> Option<bool> {
        let Some(e) = self.pick() else { return Some(true) };
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        for c in [Colour::Red, Colour::Blue] {
            let mark = self.trail.len();
            if let Step::Done = self.assign(e, c) {
                match self.solve() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.undo_to(mark);
        }
        Some(false)
    }
}

/// Decides whether `g` has a red/blue colouring with no red `H₁` and no blue `H₂`.
///
/// Edges in no copy of `H₁` are coloured red up front and edges in no copy
/// of `H₂` blue; either choice can be made in any valid colouring. The rest
/// is backtracking with forced moves on copies missing a single edge.
/// `budget` bounds the number of branching nodes.
pub fn has_valid_coloring(g: &Graph, pair: &PairSpec, budget: u64) -> OracleOutcome {
    let rs = enumerate_copies(g, &pair.h1);
    let ls = enumerate_copies(g, &pair.h2);
    let m = g.edge_count();
    let mut constraints = Vec::new();
    let mut by_edge = vec![Vec::new(); m];
    let mut in_r = vec![false; m];
    let mut in_l = vec![false; m];
    for (set, bad, mark) in [(&rs, Colour::Red, &mut in_r), (&ls, Colour::Blue, &mut in_l)] {
        for c in set.iter() {
            let edges: Vec<usize> = c.edges.iter().map(|&e| g.edge_index(e).expect("copy edge")).collect();
            for &e in &edges {
                mark[e] = true;
                by_edge[e].push(constraints.len());
            }
            constraints.push(Constraint { edges, bad, bad_count: 0, good_count: 0 });
        }
    }
    let mut s = Search { constraints, by_edge, colour: vec![None; m], trail: Vec::new(), nodes: 0, budget };
    let mut ok = true;
    for e in 0..m {
        let free = if !in_r[e] {
            Some(Colour::Red)
        } else if !in_l[e] {
            Some(Colour::Blue)
        } else {
            None
        };
        if let Some(c) = free {
            if s.colour[e].is_none() {
                if let Step::Conflict = s.assign(e, c) {
                    ok = false;
                    break;
                }
            }
        }
    }
    let result = if ok { s.solve() } else { Some(false) };
    let verdict = match result {
        Some(true) => {
            let coloring = Coloring { graph: g.clone(), colours: s.colour.clone() };
            if let Err(v) = verify_coloring(&coloring, pair) {
                panic!("search produced an invalid colouring: {v}");
            }
            Verdict::Valid(coloring)
        }
        Some(false) => Verdict::Invalid,
        None => Verdict::BudgetExceeded,
    };
    OracleOutcome { verdict, nodes_expanded: s.nodes }
}
