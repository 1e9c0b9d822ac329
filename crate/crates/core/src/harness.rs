//! `G(n,p)` trials around `p = b·n^{-1/m₂(H₁,H₂)}`: sample, colour, check
//! against the exhaustive search, and send stuck residuals through the
//! growth procedure.
//!
//! `p` is the only floating-point quantity and lives at the sampler.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ahat::{enumerate_a_hat, AHatCatalog};
use crate::colorer::{asym_edge_col, check_stuck_state, ColorerResult};
use crate::density::{build_pair_spec, default_epsilon, PairSpec};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::grow::{audit_trace, run_grow, variant_for, GrowOptions, GrowOutcome, GrowTrace, GrowVariant, TraceViolation};
use crate::oracle::{has_valid_coloring, verify_coloring, Verdict};
use crate::rational::{to_f64, Rational};
use crate::report::{ser_opt_ratio, ser_ratio};

/// A pair with its precomputed `Â` catalog.
#[derive(Clone, Debug)]
pub struct PairContext {
    pub name: String,
    pub pair: PairSpec,
    pub a_hat: Vec<Graph>,
    pub a_hat_bound: usize,
}

impl PairContext {
    pub fn new(name: &str, h1: &Graph, h2: &Graph, epsilon: Rational, a_hat_bound: usize) -> Result<PairContext> {
        let pair = build_pair_spec(h1, h2, epsilon)?;
        let cat: AHatCatalog = enumerate_a_hat(&pair, a_hat_bound);
        Ok(PairContext { name: name.to_string(), pair, a_hat: cat.graphs(), a_hat_bound })
    }
}

/// Named pairs with the `Â` bound used for them by default.
pub const PRESETS: &[(&str, usize)] = &[("k4c4", 8), ("k5c4", 8), ("k3k3", 7), ("c5c6", 9), ("k4k3", 8)];

pub fn preset_graphs(name: &str) -> Option<(Graph, Graph)> {
    Some(match name {
        "k4c4" => (Graph::complete(4), Graph::cycle(4)),
        "k5c4" => (Graph::complete(5), Graph::cycle(4)),
        "k3k3" => (Graph::complete(3), Graph::complete(3)),
        "c5c6" => (Graph::cycle(5), Graph::cycle(6)),
        "k4k3" => (Graph::complete(4), Graph::complete(3)),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<PairContext> {
    let (h1, h2) = preset_graphs(name).ok_or_else(|| Error::Precondition(format!("unknown pair preset {name}")))?;
    let bound = PRESETS.iter().find(|(n, _)| *n == name).map(|p| p.1).expect("preset has a bound");
    PairContext::new(name, &h1, &h2, default_epsilon(), bound)
}

/// Each of the `C(n,2)` edges independently with probability `p`.
///
/// Edge `k` in lexicographic order reads word `2k` of the ChaCha8 stream
/// keyed by `seed`, so the graph is a pure function of `(n, p, seed)`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = p.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for a in 0..n as Vertex {
        for b in a + 1..n as Vertex {
            let x: f64 = rng.random();
            if x < p {
                edges.push(Edge(a, b));
            }
        }
    }
    Graph::from_sorted(n, edges)
}

/// `b·n^{-1/m₂(H₁,H₂)}`, clamped to `[0,1]`.
pub fn edge_probability(n: usize, b: Rational, m2_pair: Rational) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (to_f64(&b) * (n as f64).powf(-1.0 / to_f64(&m2_pair))).clamp(0.0, 1.0)
}

/// The seed of trial `t` in the cell `(n, b)` of a sweep with master seed `master`.
pub fn trial_seed(master: u64, n: usize, b: Rational, t: usize) -> u64 {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master.to_le_bytes());
    key[8..12].copy_from_slice(&(n as u32).to_le_bytes());
    key[12..16].copy_from_slice(&(t as u32).to_le_bytes());
    key[16..24].copy_from_slice(&b.numer().to_le_bytes());
    key[24..32].copy_from_slice(&b.denom().to_le_bytes());
    ChaCha8Rng::from_seed(key).next_u64()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialMode {
    ColorOnly,
    ColorPlusOracle,
    /// Colour, run the exhaustive search, and grow from any stuck residual.
    FullPipeline,
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub n: usize,
    pub b: Rational,
    pub seed: u64,
    /// Node budget for the exhaustive search.
    pub budget: u64,
    pub mode: TrialMode,
    /// Overrides `p`; used to run the pipeline on fixed densities.
    pub p_override: Option<f64>,
}

impl TrialConfig {
    pub fn new(n: usize, b: Rational, seed: u64, mode: TrialMode) -> TrialConfig {
        TrialConfig { n, b, seed, budget: 200_000, mode, p_override: None }
    }

    pub fn p(&self, pair: &PairSpec) -> f64 {
        self.p_override.unwrap_or_else(|| edge_probability(self.n, self.b, pair.m2_pair))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorerVerdict {
    Colored,
    Stuck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    Valid,
    Invalid,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowSummary {
    pub variant: GrowVariant,
    pub outcome: GrowOutcome,
    pub steps: usize,
    pub degenerate: usize,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub min_drop: Option<Rational>,
    #[serde(serialize_with = "ser_ratio")]
    pub final_lambda: Rational,
    pub violations: Vec<TraceViolation>,
    #[serde(skip)]
    pub trace: GrowTrace,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialResult {
    pub n: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub b: Rational,
    pub seed: u64,
    pub mode: TrialMode,
    pub p: f64,
    pub edges: usize,
    pub colorer: ColorerVerdict,
    /// The colouring passed the independent checker (always true when
    /// coloured, else the trial would have failed).
    pub verified: bool,
    pub oracle: Option<OracleVerdict>,
    pub grow: Option<GrowSummary>,
    pub elapsed_ms: f64,
}

/// Runs one trial on a fresh `G(n,p)`.
pub fn run_trial(ctx: &PairContext, c: &TrialConfig) -> Result<TrialResult> {
    let p = c.p(&ctx.pair);
    let g = sample_gnp(c.n, p, c.seed);
    let mut r = run_on_graph(ctx, &g, c.mode, c.budget)?;
    r.n = c.n;
    r.b = c.b;
    r.seed = c.seed;
    r.p = p;
    Ok(r)
}

/// Runs the configured pipeline on a given graph.
pub fn run_on_graph(ctx: &PairContext, g: &Graph, mode: TrialMode, budget: u64) -> Result<TrialResult> {
    let start = Instant::now();
    let pair = &ctx.pair;
    let out = asym_edge_col(g, pair, &ctx.a_hat)?;
    let (colorer, verified) = match &out.result {
        ColorerResult::Colored(col) => {
            verify_coloring(col, pair).map_err(|v| Error::Invariant(format!("colouring failed the checker: {v}")))?;
            (ColorerVerdict::Colored, true)
        }
        ColorerResult::Stuck { .. } => (ColorerVerdict::Stuck, false),
    };
    let oracle = if mode == TrialMode::ColorOnly {
        None
    } else {
        Some(match has_valid_coloring(g, pair, budget).verdict {
            Verdict::Valid(_) => OracleVerdict::Valid,
            Verdict::Invalid => OracleVerdict::Invalid,
            Verdict::BudgetExceeded => OracleVerdict::BudgetExceeded,
        })
    };
    if colorer == ColorerVerdict::Colored && oracle == Some(OracleVerdict::Invalid) {
        return Err(Error::Invariant(format!("coloured a graph the exhaustive search rejects: {}", crate::graph6::emit_graph6(g))));
    }
    let grow = match (&out.result, mode) {
        (ColorerResult::Stuck { residual, .. }, TrialMode::FullPipeline) => {
            check_stuck_state(&out, pair, &ctx.a_hat)?;
            Some(grow_summary(residual, ctx)?)
        }
        _ => None,
    };
    Ok(TrialResult {
        n: g.vertex_count(),
        b: Rational::from_integer(0),
        seed: 0,
        mode,
        p: 0.0,
        edges: g.edge_count(),
        colorer,
        verified,
        oracle,
        grow,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Grows from a stuck residual with the variant matching the pair and audits the trace.
pub fn grow_summary(residual: &Graph, ctx: &PairContext) -> Result<GrowSummary> {
    let pair = &ctx.pair;
    let variant = variant_for(pair);
    let trace = run_grow(residual, pair, &ctx.a_hat, variant, &GrowOptions::default())?;
    let violations = audit_trace(&trace, pair);
    Ok(GrowSummary {
        variant,
        outcome: trace.outcome,
        steps: trace.steps.len(),
        degenerate: trace.degenerate_count(),
        min_drop: trace.min_degenerate_drop(),
        final_lambda: pair.lambda_of(trace.result.v(), trace.result.e()),
        violations,
        trace,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub b_num: i64,
    pub b_den: i64,
    pub p: f64,
    pub trials: usize,
    pub colored: usize,
    pub stuck: usize,
    pub oracle_valid: usize,
    pub oracle_invalid: usize,
    pub budget_exceeded: usize,
    /// Blank unless timing was requested, so that reruns stay byte-identical.
    pub mean_ms: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub ns: Vec<usize>,
    pub bs: Vec<Rational>,
    pub trials: usize,
    pub seed: u64,
    pub mode: TrialMode,
    pub budget: u64,
    pub timing: bool,
}

/// The default `b` grid: `2^k` for `k = −3..=2`.
pub fn default_b_grid() -> Vec<Rational> {
    [(1, 8), (1, 4), (1, 2), (1, 1), (2, 1), (4, 1)].iter().map(|&(a, b)| Rational::new(a, b)).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub pair: String,
    pub rows: Vec<SweepRow>,
    /// Consecutive `b` values at one `n` where the coloured fraction rose by
    /// more than three standard errors.
    pub monotonicity_flags: Vec<String>,
    #[serde(skip)]
    pub results: Vec<TrialResult>,
}

fn row_of(n: usize, b: Rational, p: f64, results: &[TrialResult], timing: bool) -> SweepRow {
    let count = |f: &dyn Fn(&TrialResult) -> bool| results.iter().filter(|r| f(r)).count();
    SweepRow {
        n,
        b_num: *b.numer(),
        b_den: *b.denom(),
        p,
        trials: results.len(),
        colored: count(&|r| r.colorer == ColorerVerdict::Colored),
        stuck: count(&|r| r.colorer == ColorerVerdict::Stuck),
        oracle_valid: count(&|r| r.oracle == Some(OracleVerdict::Valid)),
        oracle_invalid: count(&|r| r.oracle == Some(OracleVerdict::Invalid)),
        budget_exceeded: count(&|r| r.oracle == Some(OracleVerdict::BudgetExceeded)),
        mean_ms: (timing && !results.is_empty())
            .then(|| results.iter().map(|r| r.elapsed_ms).sum::<f64>() / results.len() as f64),
    }
}

fn monotonicity_flags(rows: &[SweepRow]) -> Vec<String> {
    let mut out = Vec::new();
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.n != b.n || a.trials == 0 || b.trials == 0 {
            continue;
        }
        let (fa, fb) = (a.colored as f64 / a.trials as f64, b.colored as f64 / b.trials as f64);
        let se = (fa * (1.0 - fa) / a.trials as f64 + fb * (1.0 - fb) / b.trials as f64).sqrt();
        if fb - fa > 3.0 * se.max(1e-9) {
            out.push(format!("n={} b={}/{} -> {}/{}: coloured fraction {fa:.3} -> {fb:.3}", a.n, a.b_num, a.b_den, b.b_num, b.b_den));
        }
    }
    out
}

/// Runs every `(n, b)` cell in order, trials within a cell in parallel, and
/// writes each CSV row as soon as its cell is done.
pub fn sweep_with<W: Write>(ctx: &PairContext, cfg: &SweepConfig, mut csv_out: Option<&mut csv::Writer<W>>) -> Result<SweepReport> {
    let mut report = SweepReport { pair: ctx.name.clone(), ..Default::default() };
    let mut bs = cfg.bs.clone();
    bs.sort();
    bs.dedup();
    for &n in &cfg.ns {
        for &b in &bs {
            let results: Vec<TrialResult> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut c = TrialConfig::new(n, b, trial_seed(cfg.seed, n, b, t), cfg.mode);
                    c.budget = cfg.budget;
                    run_trial(ctx, &c)
                })
                .collect::<Result<_>>()?;
            let row = row_of(n, b, edge_probability(n, b, ctx.pair.m2_pair), &results, cfg.timing);
            if let Some(w) = csv_out.as_deref_mut() {
                w.serialize(&row).map_err(|e| Error::Io(e.to_string()))?;
                w.flush().map_err(|e| Error::Io(e.to_string()))?;
            }
            report.rows.push(row);
            report.results.extend(results);
        }
    }
    report.monotonicity_flags = monotonicity_flags(&report.rows);
    Ok(report)
}

pub fn sweep(ctx: &PairContext, cfg: &SweepConfig) -> Result<SweepReport> {
    sweep_with::<Vec<u8>>(ctx, cfg, None)
}

/// The rows as CSV text, header included.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialise");
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER).expect("header");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

pub const CSV_HEADER: [&str; 11] =
    ["n", "b_num", "b_den", "p", "trials", "colored", "stuck", "oracle_valid", "oracle_invalid", "budget_exceeded", "mean_ms"];
