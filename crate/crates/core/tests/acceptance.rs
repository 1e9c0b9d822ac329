//! Acceptance run: one PASS/FAIL line per criterion. Library results are
//! checked against the brute-force references in `common` wherever the
//! criterion states a value or property, so both routes are exercised.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use asym_ramsey::ahat::enumerate_a_hat_with;
use asym_ramsey::density::{asym_balancedness, balancedness};
use asym_ramsey::flower::{audit_order, random_base, random_flower, star_density_closed_form};
use asym_ramsey::harness::{preset, sweep_with, trial_seed};
use asym_ramsey::regular::{certify_graphs, f_poly, g_poly, regular_graphs};
use asym_ramsey::{
    asym_edge_col, build_pair_spec, d2_asym, default_epsilon, has_valid_coloring, in_c, in_cstar, int, is_two_connected, m2_asym,
    m2_density, nonisomorphic_graphs, rat, sample_gnp, sweep, compare_outside_density, AHatOptions, Balance, Colour,
    ColorerResult, Graph, GrowTrace, GrowVariant, PairCase, Rational, SweepConfig, TrialMode, Verdict,
};
use common::*;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, edges).unwrap()
}

fn wheel(rim: usize) -> Graph {
    let mut edges: Vec<(u32, u32)> = (0..rim as u32).map(|i| (i, (i + 1) % rim as u32)).collect();
    edges.extend((0..rim as u32).map(|i| (i, rim as u32)));
    Graph::from_edges(rim + 1, edges).unwrap()
}

fn golden_densities() -> Outcome {
    let golden = [
        (Graph::complete(3), rat(2, 1)),
        (Graph::complete(4), rat(5, 2)),
        (Graph::cycle(4), rat(3, 2)),
        (Graph::complete_bipartite(3, 3), rat(2, 1)),
    ];
    for (g, want) in &golden {
        let got = m2_density(g).0;
        ensure(got == *want && brute_m2(g) == *want, || format!("m2 of {:?} is {got}, expected {want}", g.edges()))?;
    }
    let (k4, c4) = (Graph::complete(4), Graph::cycle(4));
    let pair = m2_asym(&k4, &c4).0;
    ensure(pair == rat(9, 4) && brute_m2_pair(&k4, brute_m2(&c4)) == pair, || format!("m2(K4,C4) = {pair}"))?;
    let samples = [
        Graph::complete(3),
        Graph::complete(4),
        Graph::complete(5),
        Graph::cycle(4),
        Graph::cycle(5),
        Graph::cycle(7),
        Graph::complete_bipartite(3, 3),
        Graph::complete_bipartite(2, 3),
        wheel(5),
        petersen(),
    ];
    let k2 = Graph::complete(2);
    for h2 in &samples {
        let m = brute_m2(h2);
        ensure(d2_asym(&k2, h2) == m && m2_density(h2).0 == m, || format!("d2(K2, {:?}) differs from {m}", h2.edges()))?;
    }
    Ok(format!("{} golden values and {} samples of d2(K2,H2)", golden.len() + 1, samples.len()))
}

fn graphs_with_edges(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(nonisomorphic_graphs).filter(|g| g.edge_count() > 0).collect()
}

fn sandwich() -> Outcome {
    let graphs = graphs_with_edges(6);
    let m2: Vec<Rational> = graphs.iter().map(|g| m2_density(g).0).collect();
    for (g, m) in graphs.iter().zip(&m2) {
        ensure(brute_m2(g) == *m, || format!("m2 disagrees with the subset oracle on {:?}", g.edges()))?;
    }
    let mut cache: HashMap<(usize, Rational), Rational> = HashMap::new();
    let (mut pairs, mut strict) = (0usize, 0usize);
    for i in 0..graphs.len() {
        for j in 0..graphs.len() {
            if m2[i] < m2[j] {
                continue;
            }
            let mid = *cache.entry((i, m2[j])).or_insert_with(|| {
                asym_ramsey::density::m2_asym_given(&graphs[i], m2[j]).0
            });
            pairs += 1;
            let ok = if m2[i] > m2[j] {
                strict += 1;
                m2[i] > mid && mid > m2[j]
            } else {
                m2[i] >= mid && mid >= m2[j]
            };
            ensure(ok, || format!("{} / {} / {} on {:?} and {:?}", m2[i], mid, m2[j], graphs[i].edges(), graphs[j].edges()))?;
        }
    }
    for (&(i, m), &mid) in &cache {
        ensure(brute_m2_pair(&graphs[i], m) == mid, || format!("m2 pair disagrees with the oracle on {:?}", graphs[i].edges()))?;
    }
    Ok(format!("{pairs} ordered pairs over {} graphs, {strict} strict", graphs.len()))
}

fn two_connectivity() -> Outcome {
    let mut balanced = 0;
    for g in graphs_with_edges(7) {
        let lib = balancedness(&g, Balance::StrictlyTwoBalanced);
        ensure(lib == brute_strictly_two_balanced(&g), || format!("strict 2-balance disagrees on {:?}", g.edges()))?;
        if lib && m2_density(&g).0 > int(1) {
            balanced += 1;
            ensure(is_two_connected(&g) && brute_two_connected(&g), || format!("not 2-connected: {:?}", g.edges()))?;
        }
    }
    let graphs = graphs_with_edges(6);
    let info: Vec<(Rational, bool)> =
        graphs.iter().map(|g| (m2_density(g).0, balancedness(g, Balance::StrictlyTwoBalanced))).collect();
    let mut hyp = 0;
    for (h1, &(m1, _)) in graphs.iter().zip(&info) {
        for (h2, &(m2, sb2)) in graphs.iter().zip(&info) {
            if !(sb2 && m1 > m2 && m2 > int(1)) {
                continue;
            }
            let lib = asym_balancedness(h1, h2, true);
            ensure(lib == brute_strictly_asym_balanced(h1, m2), || format!("asym balance disagrees on {:?}", h1.edges()))?;
            if lib {
                hyp += 1;
                ensure(is_two_connected(h1) && brute_two_connected(h1), || format!("H1 not 2-connected: {:?}", h1.edges()))?;
            }
        }
    }
    Ok(format!("{balanced} strictly 2-balanced graphs, {hyp} hypothesis pairs"))
}

/// The acceptance sweep, shared by the soundness and λ criteria.
fn acceptance_config(seed: u64) -> SweepConfig {
    SweepConfig {
        ns: vec![20, 30, 40],
        bs: vec![rat(1, 4), rat(1, 2), rat(1, 1)],
        trials: 56,
        seed,
        mode: TrialMode::FullPipeline,
        budget: 20_000,
        timing: false,
    }
}

fn colour_soundness(traces: &mut Vec<(String, GrowTrace)>) -> Outcome {
    let mut summary = Vec::new();
    for name in ["k4c4", "k5c4", "k3k3"] {
        let ctx = preset(name).map_err(|e| e.to_string())?;
        let cfg = acceptance_config(2024);
        let rep = sweep(&ctx, &cfg).map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.results.len() >= 500, || format!("{name}: only {} trials", rep.results.len()))?;
        let mut coloured = 0;
        for r in &rep.results {
            if let Some(g) = &r.grow {
                traces.push((name.to_string(), g.trace.clone()));
            }
            // rebuild the graph and check the colouring without the library's checker
            let g = sample_gnp(r.n, r.p, r.seed);
            let out = asym_edge_col(&g, &ctx.pair, &ctx.a_hat).map_err(|e| e.to_string())?;
            if let ColorerResult::Colored(c) = &out.result {
                coloured += 1;
                ensure(c.colours.iter().all(Option::is_some), || format!("{name}: partial colouring, seed {}", r.seed))?;
                let red = |e| c.get(e) == Some(Colour::Red);
                let blue = |e| c.get(e) == Some(Colour::Blue);
                ensure(!has_copy(&g, &red, &ctx.pair.h1) && !has_copy(&g, &blue, &ctx.pair.h2), || {
                    format!("{name}: monochromatic copy, seed {}", r.seed)
                })?;
            }
        }
        summary.push(format!("{name} {coloured}/{}", rep.results.len()));
    }
    Ok(format!("coloured and verified: {}", summary.join(", ")))
}

fn oracle_agreement() -> Outcome {
    let mut r = rng(77);
    let mut brute_checked = 0;
    let mut counts = Vec::new();
    for name in ["k4c4", "k5c4", "k3k3"] {
        let ctx = preset(name).map_err(|e| e.to_string())?;
        let (mut done, mut invalid) = (0, 0);
        while done < 200 {
            let n = r.random_range(5..=8);
            let g = random_graph(n, r.random_range(0.4..1.0), &mut r);
            if g.edge_count() > 18 {
                continue;
            }
            done += 1;
            let coloured = asym_edge_col(&g, &ctx.pair, &ctx.a_hat).map_err(|e| e.to_string())?.is_colored();
            let verdict = has_valid_coloring(&g, &ctx.pair, u64::MAX).verdict;
            let valid = match verdict {
                Verdict::Valid(_) => true,
                Verdict::Invalid => false,
                Verdict::BudgetExceeded => return Err(format!("{name}: unbounded search gave up")),
            };
            if g.edge_count() <= 16 {
                brute_checked += 1;
                ensure(valid == brute_has_valid_colouring(&g, &ctx.pair.h1, &ctx.pair.h2), || {
                    format!("{name}: search disagrees with enumeration on {:?}", g.edges())
                })?;
            }
            if !valid {
                invalid += 1;
            }
            ensure(!(coloured && !valid), || format!("{name}: coloured an arrowing graph {:?}", g.edges()))?;
        }
        counts.push(format!("{name} {invalid} arrowing"));
    }
    let k3k3 = build_pair_spec(&Graph::complete(3), &Graph::complete(3), default_epsilon()).unwrap();
    ensure(has_valid_coloring(&Graph::complete(6), &k3k3, u64::MAX).verdict == Verdict::Invalid, || "K6 not arrowing".into())?;
    ensure(matches!(has_valid_coloring(&Graph::complete(5), &k3k3, u64::MAX).verdict, Verdict::Valid(_)), || {
        "K5 arrowing".into()
    })?;
    Ok(format!("600 graphs ({}), {brute_checked} also enumerated; K6 invalid, K5 valid", counts.join(", ")))
}

/// `K_a □ K_a`: every rectangle is a starred 4-cycle whose sides lie on four different cliques.
fn rook(a: u32) -> Graph {
    let mut edges = Vec::new();
    for r in 0..a {
        for c in 0..a {
            for d in c + 1..a {
                edges.push((r * a + c, r * a + d));
                edges.push((c * a + r, d * a + r));
            }
        }
    }
    Graph::from_edges((a * a) as usize, edges).unwrap()
}

/// Triangulated `w × h` torus: each edge lies on exactly two triangles.
fn triangular_torus(w: u32, h: u32) -> Graph {
    let id = |x: u32, y: u32| (y % h) * w + (x % w);
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            edges.extend([(id(x, y), id(x + 1, y)), (id(x, y), id(x, y + 1)), (id(x, y), id(x + 1, y + 1))]);
        }
    }
    Graph::from_edges((w * h) as usize, edges).unwrap()
}

/// Extra stuck hosts so the λ checks see loop steps even when the sweep rarely sticks.
fn supplementary_traces() -> Result<Vec<(String, GrowTrace)>, String> {
    use asym_ramsey::grow::{run_grow, variant_for, GrowOptions};
    let mut out = Vec::new();
    let mut r = rng(31);
    for name in ["k4c4", "k5c4", "k3k3"] {
        let ctx = preset(name).map_err(|e| e.to_string())?;
        let variant = variant_for(&ctx.pair);
        let mut hosts = vec![Graph::complete(6), Graph::complete(7)];
        // sparse closed hosts, where the first extensions find fresh vertices
        match name {
            "k3k3" => hosts.extend([triangular_torus(5, 5), triangular_torus(6, 6), triangular_torus(8, 8)]),
            "k4c4" => hosts.extend([rook(4), rook(5)]),
            _ => hosts.extend([rook(5), rook(6)]),
        }
        for host in hosts {
            let member = match variant {
                GrowVariant::Grow => in_cstar(&host, &ctx.pair).0,
                GrowVariant::GrowAlt => in_c(&host, &ctx.pair).0,
            };
            if !member {
                continue;
            }
            let t = run_grow(&host, &ctx.pair, &ctx.a_hat, variant, &GrowOptions { iteration_cap: Some(6) })
                .map_err(|e| format!("{name}: {e}"))?;
            out.push((name.to_string(), t));
        }
        for _ in 0..20 {
            let g = random_graph(9, 0.8, &mut r);
            let col = asym_edge_col(&g, &ctx.pair, &ctx.a_hat).map_err(|e| e.to_string())?;
            if let Some(res) = col.residual() {
                let t = run_grow(res, &ctx.pair, &ctx.a_hat, variant, &GrowOptions::default())
                    .map_err(|e| format!("{name}: {e}"))?;
                out.push((name.to_string(), t));
            }
        }
    }
    Ok(out)
}

fn lambda_bookkeeping(traces: &[(String, GrowTrace)]) -> Outcome {
    let supplementary = supplementary_traces()?;
    let (mut seeds, mut kept, mut dropped) = (0, 0, 0);
    // per pair: smallest degenerate drop, and (λ(F₀), degenerate count) per trace
    let mut campaign: HashMap<String, (Option<Rational>, Vec<(Rational, usize)>)> = HashMap::new();
    for (name, t) in traces.iter().chain(&supplementary) {
        let ctx = preset(name).map_err(|e| e.to_string())?;
        let m2_h2 = brute_m2(&ctx.pair.h2);
        let m = brute_m2_pair(&ctx.pair.h1, m2_h2);
        let lambda = |v: usize, e: usize| rat(v as i64, 1) - rat(e as i64, 1) / m;
        let Some(seed) = &t.seed else { continue };
        seeds += 1;
        let mut state = (seed.vertices.len(), seed.edges.len());
        let l0 = lambda(state.0, state.1);
        ensure(l0 == rat(2, 1) - m2_h2.recip() && l0 >= int(1), || format!("{name}: lambda(F0) = {l0}"))?;
        let entry = campaign.entry(name.clone()).or_default();
        let mut degenerate = 0;
        for s in t.steps.iter().filter(|s| s.is_loop_step()) {
            let before = lambda(state.0, state.1);
            state = (state.0 + s.added_vertices, state.1 + s.added_edges);
            let after = lambda(state.0, state.1);
            ensure(before == s.lambda_before && after == s.lambda_after, || format!("{name}: recorded lambda drifts at step {}", s.index))?;
            if s.is_degenerate() {
                dropped += 1;
                ensure(after < before, || format!("{name}: degenerate step {} keeps lambda", s.index))?;
                degenerate += 1;
                let drop = before - after;
                entry.0 = Some(entry.0.map_or(drop, |k: Rational| k.min(drop)));
            } else {
                kept += 1;
                ensure(after == before, || format!("{name}: non-degenerate step {} moves lambda", s.index))?;
            }
        }
        entry.1.push((l0, degenerate));
        let audit = asym_ramsey::grow::audit_trace(t, &ctx.pair);
        ensure(audit.is_empty(), || format!("{name}: {:?}", audit))?;
    }
    ensure(kept > 0 && dropped > 0, || format!("{kept} non-degenerate and {dropped} degenerate steps"))?;
    // every degenerate step but the last starts from a guarded F_i with λ > −γ,
    // so (q − 1)κ < λ(F₀) + γ with κ the smallest drop seen for the pair
    let mut kappas = Vec::new();
    let mut at_q1 = 0;
    for (name, (kappa, runs)) in &campaign {
        let Some(kappa) = kappa else { continue };
        ensure(*kappa > int(0), || format!("{name}: no positive drop"))?;
        let gamma = preset(name).map_err(|e| e.to_string())?.pair.gamma;
        for &(l0, q) in runs {
            let q = rat(q as i64, 1);
            ensure(q == int(0) || (q - 1) * kappa < l0 + gamma, || format!("{name}: {q} degenerate steps with kappa {kappa}"))?;
            if q * kappa > l0 + gamma {
                at_q1 += 1;
            }
        }
        kappas.push(format!("{name} {kappa}"));
    }
    kappas.sort();
    Ok(format!(
        "{} sweep traces and {} extra hosts, {seeds} seeds, {kept} non-degenerate and {dropped} degenerate steps, \
         smallest drops {}, {at_q1} traces take the final step past q1",
        traces.len(),
        supplementary.len(),
        kappas.join(", ")
    ))
}

fn flower_density_suite() -> Outcome {
    let mut report = Vec::new();
    for (name, h1, h2) in [
        ("k4c4", Graph::complete(4), Graph::cycle(4)),
        ("k5c4", Graph::complete(5), Graph::cycle(4)),
        ("c5c6", Graph::cycle(5), Graph::cycle(6)),
        ("k4k3", Graph::complete(4), Graph::complete(3)),
    ] {
        let pair = build_pair_spec(&h1, &h2, default_epsilon()).map_err(|e| e.to_string())?;
        ensure(pair.case == PairCase::Strict, || format!("{name} is not a strict pair"))?;
        let closed = brute_m2_pair(&h1, brute_m2(&h2));
        ensure(star_density_closed_form(&h1, &h2) == closed, || format!("{name}: closed form off"))?;
        let mut r = rng(21);
        let (mut done, mut tries, mut clusters) = (0, 0usize, 0);
        while done < 200 {
            tries += 1;
            ensure(tries < 20_000, || format!("{name}: sampler rarely leaves the star family"))?;
            let (base, anchor) = random_base(6, &mut r);
            let j = random_flower(&h1, &h2, &base, anchor, [0.2, 0.5, 0.8][tries % 3], &mut r);
            if j.class.is_star() {
                continue;
            }
            done += 1;
            let star = j.star_version();
            let c = compare_outside_density(&j, &star).map_err(|e| format!("{name}: {e}"))?;
            let outside = |a: &asym_ramsey::FlowerAttachment| {
                rat(
                    (a.graph.edge_count() - a.base.edge_count()) as i64,
                    (a.graph.vertex_count() - a.base.vertex_count()) as i64,
                )
            };
            let (dj, ds) = (outside(&j), outside(&star));
            ensure(dj == c.density_j && ds == c.density_star, || format!("{name}: external densities disagree"))?;
            ensure(dj > ds, || format!("{name}: {dj} <= {ds} on {:?}", j.graph.edges()))?;
            ensure(ds == closed && c.closed_form_matches, || format!("{name}: star density {ds} vs {closed}"))?;
            let audit = audit_order(&j, &pair);
            ensure(audit.failures.is_empty(), || format!("{name}: {:?}", audit.failures))?;
            clusters += audit.order.clusters.len();
        }
        report.push(format!("{name} 200 ({clusters} clusters)"));
    }
    Ok(report.join(", "))
}

fn regular_pairs() -> Outcome {
    ensure(g_poly(4, 5, 3) == 2, || format!("g(4,5,3) = {}", g_poly(4, 5, 3)))?;
    for v in 3..=20i64 {
        for l in 2..v {
            ensure(f_poly(3, v, 2, l) == v * (l - 2) - 6, || format!("f(3,{v},2,{l})"))?;
            ensure(f_poly(v, 4, l, 3) == 10 * v - 8 * (l + 2), || format!("f({v},4,{l},3)"))?;
        }
    }
    let mut tuples = 0;
    for v1 in 3..=12i64 {
        for l1 in (2..v1).filter(|l| v1 * l % 2 == 0) {
            for v2 in 3..=12i64 {
                for l2 in (2..v2).filter(|l| v2 * l % 2 == 0) {
                    let m2_h2 = rat(v2 * l2 / 2 - 1, v2 - 2);
                    let m = int(v1 * l1 / 2) / (int(v1 - 2) + m2_h2.recip());
                    let lhs = rat(l1 + l2 - 1, 2) > m;
                    ensure(lhs == (f_poly(v1, v2, l1, l2) > 0), || format!("chain breaks at ({v1},{l1},{v2},{l2})"))?;
                    tuples += 1;
                }
            }
        }
    }
    let cubic = regular_graphs(6, 3);
    let strict: Vec<&Graph> = cubic.iter().filter(|g| brute_strictly_two_balanced(g)).collect();
    ensure(cubic.len() == 2 && strict.len() == 1, || format!("{} cubic graphs on 6 vertices", cubic.len()))?;
    ensure(brute_isomorphic(strict[0], &Graph::complete_bipartite(3, 3)), || "the balanced one is not K33".into())?;
    let certified = [
        (Graph::complete(5), Graph::complete(4)),
        (Graph::cycle(5), Graph::cycle(6)),
        (Graph::complete(4), Graph::complete_bipartite(3, 3)),
        (Graph::complete(6), Graph::complete(5)),
    ];
    for (h1, h2) in &certified {
        let cert = certify_graphs(h1, h2).map_err(|e| e.to_string())?.map_err(|e| format!("{e:?}"))?;
        let pair = build_pair_spec(h1, h2, cert.epsilon_star).map_err(|e| e.to_string())?;
        let bound = 2 * (h1.vertex_count() + h2.vertex_count());
        let cat = enumerate_a_hat_with(&pair, &AHatOptions::new(bound));
        ensure(cat.is_empty() && cat.complete, || format!("catalog for {:?} not empty up to {bound}", h1.edges()))?;
    }
    Ok(format!("{tuples} tuples in the chain, {} certified pairs with empty catalogs", certified.len()))
}

fn determinism() -> Outcome {
    let mut bytes = 0;
    for name in ["k4c4", "k3k3"] {
        let ctx = preset(name).map_err(|e| e.to_string())?;
        let cfg = SweepConfig { ns: vec![12, 20], bs: vec![rat(1, 2), rat(1, 1)], trials: 10, ..acceptance_config(9) };
        let run = || -> Result<Vec<u8>, String> {
            let mut w = csv::Writer::from_writer(Vec::new());
            sweep_with(&ctx, &cfg, Some(&mut w)).map_err(|e| e.to_string())?;
            w.into_inner().map_err(|e| e.to_string())
        };
        let (a, b) = (run()?, run()?);
        ensure(a == b, || format!("{name}: CSV differs between runs"))?;
        ensure(trial_seed(9, 12, rat(1, 2), 0) == trial_seed(9, 12, rat(1, 2), 0), || "seed derivation".into())?;
        bytes += a.len();
    }
    Ok(format!("two pairs rerun, {bytes} bytes identical"))
}

fn main() -> ExitCode {
    let mut traces = Vec::new();
    let mut failed = 0;
    let mut report = |n: u32, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if took > limit {
                outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail}; {took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why}; {took:.2?})");
            }
        }
    };
    let min = |m: u64| Some(Duration::from_secs(60 * m));
    report(1, Some(Duration::from_secs(1)), &mut golden_densities);
    report(2, min(5), &mut sandwich);
    report(3, None, &mut two_connectivity);
    report(4, min(15), &mut || colour_soundness(&mut traces));
    report(5, min(10), &mut oracle_agreement);
    report(6, None, &mut || lambda_bookkeeping(&traces));
    report(7, None, &mut flower_density_suite);
    report(8, min(10), &mut regular_pairs);
    report(9, None, &mut determinism);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
