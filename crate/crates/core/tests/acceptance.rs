//! Acceptance run: each criterion at its stated size and time limit, one
//! PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#[path = "support/brute.rs"]
mod brute;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use susy_kit::calculus::{graft, total_grafting};
use susy_kit::dual::{dual_graph, modular_dual_graph};
use susy_kit::enumerate::{enumerate_strata, modular_shapes, DEFAULT_MAX_EDGES};
use susy_kit::gen::{
    random_composable_pair, random_curve_config, random_morphism, random_partition, random_stable_graph, random_tree,
    GraphParams,
};
use susy_kit::lift::{edge_colorings, lift_tree_coloring, TailPartition};
use susy_kit::operad::{
    check_operad_axioms, evaluate_operad, evaluate_via_elementaries, project, recipe_compose, stratum_dimension,
    GluingRecipe, CONDITIONS,
};
use susy_kit::{Color, Edge, FlagId, Label, SusyGraph, VertexId};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params() -> GraphParams {
    GraphParams::default()
}

/// Ramond parity checked from scratch: every vertex sees an even number of
/// Ramond flags.
fn parity_holds(g: &SusyGraph, color: &BTreeMap<FlagId, Color>) -> bool {
    let mut count: BTreeMap<&VertexId, usize> = BTreeMap::new();
    for (f, v) in &g.graph.boundary {
        if color[f] == Color::R {
            *count.entry(v).or_default() += 1;
        }
    }
    count.values().all(|n| n % 2 == 0)
}

fn tail_colors(t: &SusyGraph, p: &TailPartition) -> BTreeMap<FlagId, Color> {
    t.labeling
        .ns_labels
        .iter()
        .map(|(l, f)| (f.clone(), if p.r.contains(l) { Color::R } else { Color::Ns }))
        .collect()
}

fn unique_tree_lift() -> Outcome {
    let mut r = rng(1);
    let trees: Vec<SusyGraph> = (0..200).map(|_| random_tree(&mut r, 12)).collect();
    let samples: Vec<(usize, TailPartition)> = trees
        .iter()
        .enumerate()
        .flat_map(|(i, t)| {
            let labels: Vec<Label> = t.labeling.ns_labels.keys().cloned().collect();
            (0..5).map(|_| (i, random_partition(&mut r, &labels))).collect::<Vec<_>>()
        })
        .collect();
    samples.par_iter().try_for_each(|(i, p)| -> Result<(), String> {
        let t = &trees[*i];
        let lifted = lift_tree_coloring(t, p).map_err(|e| format!("tree {i}: {e}"))?;
        let tails = tail_colors(t, p);
        let edges: Vec<Edge> = t.graph.edges().into_iter().collect();
        let mut valid = Vec::new();
        for mask in 0u32..1 << edges.len() {
            let mut color = tails.clone();
            for (k, (a, b)) in edges.iter().enumerate() {
                let c = if mask >> k & 1 == 1 { Color::R } else { Color::Ns };
                color.insert(a.clone(), c);
                color.insert(b.clone(), c);
            }
            if parity_holds(t, &color) {
                valid.push(color);
            }
        }
        ensure(valid.len() == 1, || format!("tree {i}: {} valid colorings", valid.len()))?;
        ensure(lifted.labeling.color == valid[0], || format!("tree {i}: lift differs from brute force"))
    })?;
    let max_tails = trees.iter().map(|t| t.graph.tails().len()).max().unwrap_or(0);
    Ok(format!("{} trees (up to {max_tails} tails), {} partitions", trees.len(), samples.len()))
}

fn lift_counts() -> Outcome {
    let mut r = rng(2);
    let trees: Vec<SusyGraph> = (0..100).map(|_| random_tree(&mut r, 12)).collect();
    trees.par_iter().enumerate().try_for_each(|(i, t)| -> Result<(), String> {
        let labels: Vec<Label> = t.labeling.ns_labels.keys().cloned().collect();
        let n = labels.len();
        let mut lifted = 0u64;
        for mask in 0u32..1 << n {
            let (r_side, ns_side): (Vec<_>, Vec<_>) = labels.iter().enumerate().partition(|(k, _)| mask >> k & 1 == 1);
            let p = TailPartition::new(ns_side.into_iter().map(|x| x.1.clone()), r_side.into_iter().map(|x| x.1.clone()));
            let even = p.r.len().is_multiple_of(2);
            match lift_tree_coloring(t, &p) {
                Ok(g) if even && g.validate().is_valid() => lifted += 1,
                Err(_) if !even => {}
                other => return Err(format!("tree {i}, mask {mask:b}: unexpected {:?}", other.map(|_| ()))),
            }
        }
        ensure(lifted == 1 << (n - 1), || format!("tree {i}: {lifted} lifts for {n} tails"))
    })?;
    Ok(format!("{} trees, every subset of tails tried", trees.len()))
}

fn genus_and_dimension() -> Outcome {
    let mut r = rng(3);
    let graphs: Vec<SusyGraph> = (0..500).map(|_| random_stable_graph(&mut r, params())).collect();
    for (i, g) in graphs.iter().enumerate() {
        ensure(g.graph.is_connected(), || format!("graph {i} disconnected"))?;
        let (v, e) = (g.graph.vertices.len() as i64, g.graph.edge_count() as i64);
        let b1 = e - v + 1;
        let vertex_genus: i64 = g.labeling.genus.values().map(|x| *x as i64).sum();
        let genus = g.genus() as i64;
        ensure(genus == vertex_genus + b1, || format!("graph {i}: genus {genus} != {vertex_genus} + {b1}"))?;

        let d = stratum_dimension(g).map_err(|e| format!("graph {i}: {e}"))?;
        let t_ns = g.tails_of_color(Color::Ns).len() as i64;
        let t_r = g.tails_of_color(Color::R).len() as i64;
        let e_r = g.edges_of_color(Color::R).len() as i64;
        let even = 3 * genus - 3 + t_ns + t_r - e;
        let odd2 = 2 * (2 * genus - 2 + t_ns) + t_r;
        let mut even_sum = 0;
        let mut odd2_sum = 2 * e_r;
        for v in &g.graph.vertices {
            let (ns, rr) = g.colored_star(v);
            let gv = g.genus_of(v) as i64;
            even_sum += 3 * gv - 3 + ns.len() as i64 + rr.len() as i64;
            odd2_sum += 2 * (2 * gv - 2 + ns.len() as i64) + rr.len() as i64;
        }
        ensure(even == even_sum && odd2 == odd2_sum, || {
            format!("graph {i}: closed forms {even}|{odd2}/2, sums {even_sum}|{odd2_sum}/2")
        })?;
        ensure(d.even == even && 2 * d.odd == odd2 && d.codim == (e as usize, 0), || {
            format!("graph {i}: stratum_dimension gave {d:?}")
        })?;
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn functoriality() -> Outcome {
    let mut r = rng(4);
    let pairs: Vec<_> = (0..200).map(|_| random_composable_pair(&mut r, params())).collect();
    let mut grafts = 0;
    for (i, (h, f)) in pairs.iter().enumerate() {
        ensure(h.source.graph.vertices.len() <= 6, || format!("pair {i}: too many vertices"))?;
        let whole = evaluate_operad(&h.then(f).map_err(|e| e.to_string())?).map_err(|e| format!("pair {i}: {e}"))?;
        let rh = evaluate_operad(h).map_err(|e| format!("pair {i}: {e}"))?;
        let rf = evaluate_operad(f).map_err(|e| format!("pair {i}: {e}"))?;
        let composed = recipe_compose(&rh, &rf).map_err(|e| format!("pair {i}: {e}"))?;
        ensure(whole == composed, || format!("pair {i}: O(f∘h) != O(f)∘O(h)"))?;

        let g = &h.source;
        let id = evaluate_operad(&total_grafting(g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(id == GluingRecipe::identity(&id.source), || format!("pair {i}: total grafting is not an identity"))?;
        for c in [Color::Ns, Color::R] {
            let tails: Vec<FlagId> = g.tails_of_color(c).into_iter().collect();
            if tails.len() >= 2 {
                let m = graft(g, &[(tails[0].clone(), tails[1].clone())]).map_err(|e| e.to_string())?;
                let rec = evaluate_operad(&m).map_err(|e| e.to_string())?;
                ensure(rec == GluingRecipe::identity(&rec.source), || format!("pair {i}: grafting is not an identity"))?;
                grafts += 1;
            }
        }
    }
    Ok(format!("{} composable pairs, {grafts} single graftings", pairs.len()))
}

fn decomposition_independence() -> Outcome {
    let mut r = rng(5);
    let mut drawn = 0;
    for i in 0..200 {
        let h = loop {
            drawn += 1;
            let g = random_stable_graph(&mut r, params());
            let h = random_morphism(&mut r, &g);
            if h.contracted.len() >= 2 {
                break h;
            }
        };
        let lex: Vec<Edge> = h.contracted.iter().cloned().collect();
        let mut other = lex.clone();
        while other == lex {
            other.shuffle(&mut r);
        }
        let a = evaluate_via_elementaries(&h, &lex).map_err(|e| format!("morphism {i}: {e}"))?;
        let b = evaluate_via_elementaries(&h, &other).map_err(|e| format!("morphism {i}: {e}"))?;
        ensure(a == b, || format!("morphism {i}: orders disagree"))?;
        ensure(a == evaluate_operad(&h).map_err(|e| e.to_string())?, || format!("morphism {i}: differs from direct"))?;
    }
    let report = check_operad_axioms(5, 100);
    for c in &report.conditions {
        ensure(c.cases >= 100 && c.failures.is_empty(), || {
            format!("axiom {} ({}): {} cases, {} failures", c.condition, c.name, c.cases, c.failures.len())
        })?;
    }
    ensure(report.conditions.len() == CONDITIONS.len(), || "missing axiom families".into())?;
    Ok(format!(
        "200 morphisms with two or more contractions ({drawn} drawn), {} axiom families x 100 cases",
        report.conditions.len()
    ))
}

fn projection_square() -> Outcome {
    let mut r = rng(6);
    for i in 0..200 {
        let g = random_stable_graph(&mut r, params());
        let h = random_morphism(&mut r, &g);
        let lhs = project(&evaluate_operad(&h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let rhs = evaluate_operad(&h.forget()).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("morphism {i}: P(O(h)) != o(F(h))"))?;
    }
    Ok("200 morphisms".into())
}

fn labels(k: usize, offset: usize) -> Vec<Label> {
    (offset..offset + k).map(|i| Label(format!("{}", i + 1))).collect()
}

fn strata_counts() -> Outcome {
    let mut parts = Vec::new();
    for (g, ns, rr, expected) in [(0, 4, 0, 4), (0, 2, 2, 4), (1, 1, 0, 3), (0, 5, 0, 26)] {
        let strata =
            enumerate_strata(g, &labels(ns, 0), &labels(rr, ns), DEFAULT_MAX_EDGES).map_err(|e| e.to_string())?;
        let (brute, per_shape) = brute::brute_strata(g, ns, rr);
        ensure(strata.len() == expected && brute == expected, || {
            format!("g={g} ns={ns} r={rr}: enumerated {}, brute force {brute}, expected {expected}", strata.len())
        })?;
        ensure(per_shape.iter().all(|(a, b)| a == b), || format!("g={g}: brute-force colorings != 2^b1"))?;
        let partition = TailPartition::new(labels(ns, 0), labels(rr, ns));
        for s in modular_shapes(g, &labels(ns + rr, 0), DEFAULT_MAX_EDGES).map_err(|e| e.to_string())? {
            let b1 = s.graph.edge_count() + 1 - s.graph.vertices.len();
            let n = edge_colorings(&s, &partition).map_err(|e| e.to_string())?.len();
            ensure(n == 1 << b1, || format!("g={g}: shape with b1={b1} has {n} colorings"))?;
        }
        parts.push(format!("({g},{ns},{rr})={}", strata.len()));
    }
    Ok(parts.join(" "))
}

fn dual_reduction() -> Outcome {
    let mut r = rng(8);
    for i in 0..200 {
        let c = random_curve_config(&mut r, params());
        let sigma = dual_graph(&c).map_err(|e| format!("config {i}: {e}"))?.forget();
        let plain = modular_dual_graph(&c).map_err(|e| format!("config {i}: {e}"))?;
        ensure(sigma == plain, || format!("config {i}: forget(dual) != colorless dual"))?;
    }
    Ok("200 configurations".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("unique tree lift", 30, unique_tree_lift),
        ("lift counts 2^(#T-1)", 30, lift_counts),
        ("genus and dimension consistency", 10, genus_and_dimension),
        ("operad functoriality", 60, functoriality),
        ("decomposition independence and axioms", 60, decomposition_independence),
        ("projection square", 30, projection_square),
        ("strata counts", 60, strata_counts),
        ("dual-graph reduction compatibility", 10, dual_reduction),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} [{}] {name}: {detail} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
