use std::fs;
use std::io::Write;
use std::path::Path;

use asym_ramsey::colorer::{trace_to_jsonl, StuckReport};
use asym_ramsey::density::{profile, PairCase};
use asym_ramsey::families::{a_hat_membership, sg_decompose};
use asym_ramsey::grow::{audit_trace, run_grow, variant_for, GrowOptions};
use asym_ramsey::harness::{default_b_grid, preset_graphs, sweep_with, PRESETS};
use asym_ramsey::rational::{fmt_ratio, parse_ratio, to_f64};
use asym_ramsey::regular::{exclusions, f_poly, m2_pair_regular};
use asym_ramsey::{
    asym_balancedness, asym_edge_col, balancedness, build_pair_spec, certify_emptiness, check_stuck_state, d2_asym,
    default_epsilon, emit_graph6, family_report, has_valid_coloring, m2_asym, parse_graph, run_trial, verify_coloring,
    Balance, ColorerResult, Coloring, Error, Graph, GrowVariant, PairContext, Rational, RegularPairParams, SweepConfig,
    TrialConfig, TrialMode, Verdict,
};
use serde_json::{json, Value};

use crate::{Cli, Command, Format, Mode, PairArgs, Variant};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Invariant(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

type Res<T> = Result<T, Failure>;

fn config(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn invariant(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

/// Writes `text` to `<out>/<stem>.<ext>`, or stdout without `--out`.
fn emit(out: Option<&Path>, stem: &str, ext: &str, text: &str) -> Res<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{stem}.{ext}"));
            fs::write(&path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(text.as_bytes()).and_then(|_| match text.ends_with('\n') {
                true => Ok(()),
                false => stdout.write_all(b"\n"),
            });
            match written {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

fn emit_json(cli: &Cli, stem: &str, v: &Value) -> Res<()> {
    emit(cli.out.as_deref(), stem, "json", &serde_json::to_string_pretty(v).expect("json values serialise"))
}

fn graph_arg(text: &str) -> Res<Graph> {
    Ok(parse_graph(text)?)
}

fn pair_context(p: &PairArgs) -> Res<PairContext> {
    let epsilon = match &p.epsilon {
        Some(t) => parse_ratio(t)?,
        None => default_epsilon(),
    };
    let (name, h1, h2, default_bound) = match (&p.pair, &p.pair_h1, &p.pair_h2) {
        (Some(name), _, _) => {
            let (h1, h2) = preset_graphs(name).ok_or_else(|| {
                let known: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
                config(format!("unknown pair {name:?}; known: {}", known.join(", ")))
            })?;
            let bound = PRESETS.iter().find(|p| p.0 == name).map_or(8, |p| p.1);
            (name.clone(), h1, h2, bound)
        }
        (None, Some(a), Some(b)) => ("custom".to_string(), graph_arg(a)?, graph_arg(b)?, 8),
        _ => return Err(config("give --pair NAME or both --pair-h1 and --pair-h2")),
    };
    Ok(PairContext::new(&name, &h1, &h2, epsilon, p.a_hat_bound.unwrap_or(default_bound))?)
}

fn trial_mode(m: Mode) -> TrialMode {
    match m {
        Mode::ColorOnly => TrialMode::ColorOnly,
        Mode::ColorPlusOracle => TrialMode::ColorPlusOracle,
        Mode::FullPipeline => TrialMode::FullPipeline,
    }
}

fn edge_json(e: asym_ramsey::Edge) -> Value {
    json!([e.0, e.1])
}

fn coloring_json(c: &Coloring) -> Value {
    let edges: Vec<Value> = c
        .graph
        .edges()
        .iter()
        .zip(&c.colours)
        .map(|(&e, col)| json!({ "edge": edge_json(e), "colour": col }))
        .collect();
    Value::Array(edges)
}

fn ratio(r: &Rational) -> Value {
    Value::String(fmt_ratio(r))
}

pub fn run(cli: &Cli) -> Res<()> {
    match &cli.command {
        Command::Sweep { pair, ns, bs, trials, mode, budget, timing } => {
            let ctx = pair_context(pair)?;
            let bs = if bs.is_empty() { default_b_grid() } else { bs.iter().map(|b| parse_ratio(b)).collect::<Result<_, _>>()? };
            let cfg = SweepConfig {
                ns: ns.clone(),
                bs,
                trials: *trials,
                seed: cli.seed,
                mode: trial_mode(*mode),
                budget: *budget,
                timing: *timing,
            };
            sweep(cli, &ctx, &cfg)
        }
        Command::Trial { pair, n, b, mode, budget } => {
            let ctx = pair_context(pair)?;
            let mut tc = TrialConfig::new(*n, parse_ratio(b)?, cli.seed, trial_mode(*mode));
            tc.budget = *budget;
            let r = run_trial(&ctx, &tc)?;
            if cli.format == Some(Format::Csv) {
                let grow = r.grow.as_ref();
                let text = format!(
                    "n,b,seed,p,edges,colorer,oracle,grow_steps,grow_degenerate,violations\n{},{},{},{},{},{:?},{},{},{},{}\n",
                    r.n,
                    fmt_ratio(&r.b),
                    r.seed,
                    r.p,
                    r.edges,
                    r.colorer,
                    r.oracle.map_or(String::new(), |o| format!("{o:?}")),
                    grow.map_or(String::new(), |g| g.steps.to_string()),
                    grow.map_or(String::new(), |g| g.degenerate.to_string()),
                    grow.map_or(0, |g| g.violations.len()),
                );
                emit(cli.out.as_deref(), "trial", "csv", &text)?;
            } else {
                emit_json(cli, "trial", &serde_json::to_value(&r).expect("trial results serialise"))?;
            }
            if let Some(g) = &r.grow {
                if !g.violations.is_empty() {
                    return Err(invariant(format!("grow audit found {} violations", g.violations.len())));
                }
            }
            Ok(())
        }
        Command::Color { graph, pair, trace } => {
            json_only(cli, "color")?;
            color(cli, &graph_arg(graph)?, &pair_context(pair)?, trace.as_deref())
        }
        Command::Oracle { graph, pair, budget } => {
            json_only(cli, "oracle")?;
            let g = graph_arg(graph)?;
            let ctx = pair_context(pair)?;
            let out = has_valid_coloring(&g, &ctx.pair, *budget);
            let (verdict, coloring) = match &out.verdict {
                Verdict::Valid(c) => {
                    verify_coloring(c, &ctx.pair).map_err(|v| invariant(format!("search returned a bad colouring: {v}")))?;
                    ("valid", Some(coloring_json(c)))
                }
                Verdict::Invalid => ("invalid", None),
                Verdict::BudgetExceeded => ("budget_exceeded", None),
            };
            let mut v = json!({ "verdict": verdict, "nodes_expanded": out.nodes_expanded });
            if let Some(c) = coloring {
                v["coloring"] = c;
            }
            emit_json(cli, "oracle", &v)
        }
        Command::Grow { host, pair, variant, trace, cap } => {
            json_only(cli, "grow")?;
            grow(cli, &graph_arg(host)?, &pair_context(pair)?, *variant, trace.as_deref(), *cap)
        }
        Command::Density { graph, pair } => density(cli, &graph_arg(graph)?, pair.as_deref().map(graph_arg).transpose()?),
        Command::Families { graph, pair } => {
            json_only(cli, "families")?;
            families(cli, &graph_arg(graph)?, &pair_context(pair)?)
        }
        Command::RegularCert { v1, l1, v2, l2, h1, h2, sweep } => {
            if let Some(s) = sweep {
                return regular_sweep(cli, s[0], s[1]);
            }
            let (params, cert) = match (h1, h2) {
                (Some(a), Some(b)) => {
                    let (a, b) = (graph_arg(a)?, graph_arg(b)?);
                    (RegularPairParams::of_graphs(&a, &b)?, asym_ramsey::regular::certify_graphs(&a, &b)?)
                }
                _ => {
                    let p = RegularPairParams::new(v1.unwrap(), l1.unwrap(), v2.unwrap(), l2.unwrap())?;
                    (p, certify_emptiness(&p))
                }
            };
            if cli.format == Some(Format::Csv) {
                let text = format!("{}\n{}\n", REGULAR_HEADER, regular_row(&params, &cert));
                return emit(cli.out.as_deref(), "regular-cert", "csv", &text);
            }
            let v = match &cert {
                Ok(c) => json!({ "certificate": c }),
                Err(r) => json!({ "params": params, "rejection": r, "reason": r.to_string() }),
            };
            emit_json(cli, "regular-cert", &v)
        }
    }
}

fn json_only(cli: &Cli, what: &str) -> Res<()> {
    if cli.format == Some(Format::Csv) {
        return Err(config(format!("{what} only writes JSON")));
    }
    Ok(())
}

fn sweep(cli: &Cli, ctx: &PairContext, cfg: &SweepConfig) -> Res<()> {
    let report = if cli.format == Some(Format::Json) {
        let report = asym_ramsey::sweep(ctx, cfg)?;
        emit_json(cli, "sweep", &serde_json::to_value(&report).expect("reports serialise"))?;
        report
    } else {
        match &cli.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join("sweep.csv");
                let mut w = csv::Writer::from_path(&path).map_err(|e| Failure { code: 1, message: e.to_string() })?;
                let report = sweep_with(ctx, cfg, Some(&mut w))?;
                eprintln!("wrote {}", path.display());
                report
            }
            None => {
                let mut w = csv::Writer::from_writer(std::io::stdout());
                sweep_with(ctx, cfg, Some(&mut w))?
            }
        }
    };
    if let Some(dir) = &cli.out {
        // grow traces of stuck trials, one file each
        let traces = dir.join("traces");
        for r in report.results.iter().filter(|r| r.grow.is_some()) {
            fs::create_dir_all(&traces)?;
            let g = r.grow.as_ref().unwrap();
            let name = format!("n{}_b{}-{}_s{}.jsonl", r.n, r.b.numer(), r.b.denom(), r.seed);
            fs::write(traces.join(name), g.trace.to_jsonl())?;
        }
    }
    for flag in &report.monotonicity_flags {
        eprintln!("note: {flag}");
    }
    let bad: usize = report.results.iter().filter_map(|r| r.grow.as_ref()).map(|g| g.violations.len()).sum();
    if bad > 0 {
        return Err(invariant(format!("grow audits found {bad} violations")));
    }
    Ok(())
}

fn color(cli: &Cli, g: &Graph, ctx: &PairContext, trace: Option<&Path>) -> Res<()> {
    let out = asym_edge_col(g, &ctx.pair, &ctx.a_hat)?;
    if let Some(path) = trace {
        fs::write(path, trace_to_jsonl(&out.trace))?;
    }
    let mut v = json!({
        "graph": emit_graph6(g),
        "edges": g.edge_count(),
        "events": out.trace.len(),
        "stack_peak": out.stack_peak,
        "a_hat_members": ctx.a_hat.len(),
    });
    match &out.result {
        ColorerResult::Colored(c) => {
            verify_coloring(c, &ctx.pair).map_err(|e| invariant(format!("colouring failed the checker: {e}")))?;
            v["result"] = json!("colored");
            v["coloring"] = coloring_json(c);
        }
        ColorerResult::Stuck { residual, .. } => {
            let report: StuckReport = check_stuck_state(&out, &ctx.pair, &ctx.a_hat)?;
            v["result"] = json!("stuck");
            v["residual"] = json!(emit_graph6(residual));
            v["stuck"] = serde_json::to_value(&report).expect("reports serialise");
        }
    }
    emit_json(cli, "color", &v)
}

fn grow(cli: &Cli, host: &Graph, ctx: &PairContext, variant: Option<Variant>, trace: Option<&Path>, cap: Option<usize>) -> Res<()> {
    let variant = match variant {
        Some(Variant::Grow) => GrowVariant::Grow,
        Some(Variant::GrowAlt) => GrowVariant::GrowAlt,
        None => variant_for(&ctx.pair),
    };
    let t = run_grow(host, &ctx.pair, &ctx.a_hat, variant, &GrowOptions { iteration_cap: cap })?;
    if let Some(path) = trace {
        fs::write(path, t.to_jsonl())?;
    }
    let violations = audit_trace(&t, &ctx.pair);
    let v = json!({
        "variant": variant,
        "outcome": t.outcome,
        "steps": t.steps.len(),
        "degenerate": t.degenerate_count(),
        "min_drop": t.min_degenerate_drop().map(|r| fmt_ratio(&r)),
        "result_vertices": t.result.v(),
        "result_edges": t.result.e(),
        "final_lambda": ratio(&ctx.pair.lambda_of(t.result.v(), t.result.e())),
        "violations": violations,
    });
    emit_json(cli, "grow", &v)?;
    if !violations.is_empty() {
        return Err(invariant(format!("{} λ-bookkeeping violations", violations.len())));
    }
    Ok(())
}

fn density(cli: &Cli, g: &Graph, h2: Option<Graph>) -> Res<()> {
    let p = profile(g);
    let mut rows: Vec<(&str, Rational)> = vec![("d", p.d), ("m", p.m), ("d2", p.d2), ("m2", p.m2)];
    let flags = json!({
        "balanced": balancedness(g, Balance::Balanced),
        "strictly_balanced": balancedness(g, Balance::StrictlyBalanced),
        "two_balanced": balancedness(g, Balance::TwoBalanced),
        "strictly_two_balanced": balancedness(g, Balance::StrictlyTwoBalanced),
    });
    let mut v = serde_json::to_value(&p).expect("profiles serialise");
    v["balancedness"] = flags;
    if let Some(h2) = &h2 {
        if g.edge_count() == 0 || h2.edge_count() == 0 {
            return Err(config("both graphs need an edge for the asymmetric measures"));
        }
        let (m2_pair, witness) = m2_asym(g, h2);
        let d2_pair = d2_asym(g, h2);
        rows.extend([("d2_pair", d2_pair), ("m2_pair", m2_pair)]);
        v["pair"] = json!({
            "d2": ratio(&d2_pair),
            "m2": ratio(&m2_pair),
            "witness": witness,
            "balanced": asym_balancedness(g, h2, false),
            "strictly_balanced": asym_balancedness(g, h2, true),
        });
    }
    if cli.format == Some(Format::Csv) {
        let mut text = String::from("measure,fraction,decimal\n");
        for (name, r) in rows {
            text.push_str(&format!("{name},{},{:.6}\n", fmt_ratio(&r), to_f64(&r)));
        }
        emit(cli.out.as_deref(), "density", "csv", &text)
    } else {
        emit_json(cli, "density", &v)
    }
}

fn families(cli: &Cli, g: &Graph, ctx: &PairContext) -> Res<()> {
    let r = family_report(g, &ctx.pair);
    let dec = sg_decompose(g, &ctx.pair, &ctx.a_hat);
    let pair = build_pair_spec(&ctx.pair.h1, &ctx.pair.h2, ctx.pair.epsilon)?;
    let v = json!({
        "graph": emit_graph6(g),
        "case": match pair.case { PairCase::Strict => "strict", PairCase::Equal => "equal" },
        "in_c": r.in_c,
        "in_cstar": r.in_cstar,
        "c_failures": r.c_failures.iter().map(|&e| edge_json(e)).collect::<Vec<_>>(),
        "cstar_failures": r.cstar_failures.iter().map(|&e| edge_json(e)).collect::<Vec<_>>(),
        "starred_copies": r.lstar_copies.copies.len(),
        "a_hat_member": a_hat_membership(g, &pair),
        "a_hat_catalog": ctx.a_hat.iter().map(emit_graph6).collect::<Vec<_>>(),
        "a_hat_graph": dec.is_a_hat_graph(),
        "sparse": dec.is_sparse(),
        "members_found": dec.members.len(),
    });
    emit_json(cli, "families", &v)
}

const REGULAR_HEADER: &str = "v1,l1,v2,l2,f,margin,route";

fn regular_row(p: &RegularPairParams, cert: &Result<asym_ramsey::EmptinessCertificate, asym_ramsey::Rejection>) -> String {
    let margin = Rational::new(p.l1 + p.l2 - 1, 2) - m2_pair_regular(p);
    let route = match cert {
        Ok(c) => format!("{:?}", c.route),
        Err(asym_ramsey::Rejection::Excluded(_)) => {
            let names: Vec<String> = exclusions(p).iter().map(|e| format!("{e:?}")).collect();
            format!("excluded:{}", names.join("+"))
        }
        Err(asym_ramsey::Rejection::HypothesesUnmet(_)) => "hypotheses_unmet".into(),
        Err(asym_ramsey::Rejection::Uncovered { .. }) => "uncovered".into(),
    };
    format!("{},{},{},{},{},{},{route}", p.v1, p.l1, p.v2, p.l2, f_poly(p.v1, p.v2, p.l1, p.l2), fmt_ratio(&margin))
}

fn regular_sweep(cli: &Cli, v1_max: i64, v2_max: i64) -> Res<()> {
    if v1_max < 3 || v2_max < 3 {
        return Err(config("sweep bounds must be at least 3"));
    }
    let mut text = format!("{REGULAR_HEADER}\n");
    let shapes = |max: i64| (3..=max).flat_map(|v| (2..v).filter(move |l| v * l % 2 == 0).map(move |l| (v, l)));
    for (v1, l1) in shapes(v1_max) {
        for (v2, l2) in shapes(v2_max) {
            let p = RegularPairParams::new(v1, l1, v2, l2)?;
            text.push_str(&regular_row(&p, &certify_emptiness(&p)));
            text.push('\n');
        }
    }
    emit(cli.out.as_deref(), "regular-cert", "csv", &text)
}
