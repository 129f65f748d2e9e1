use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use susy_kit::enumerate::{canonical_form, enumerate_strata, DEFAULT_MAX_EDGES};
use susy_kit::gen::{random_composable_pair, random_partition, random_stable_graph, random_tree, GraphParams};
use susy_kit::lift::lift_tree_coloring;
use susy_kit::operad::{check_operad_axioms, evaluate_operad, stratum_dimension};
use susy_kit::Label;

fn labels(from: usize, k: usize) -> Vec<Label> {
    (from..from + k).map(|i| Label(i.to_string())).collect()
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_strata");
    group.sample_size(10);
    for (g, ns, r) in [(0, 5, 0), (0, 4, 2), (1, 2, 0), (2, 0, 0), (1, 1, 2)] {
        group.bench_function(format!("g{g}_ns{ns}_r{r}"), |b| {
            b.iter(|| enumerate_strata(g, &labels(1, ns), &labels(ns + 1, r), DEFAULT_MAX_EDGES).unwrap())
        });
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let params = GraphParams { max_genus: 2, max_tails: 6, max_edges: 6 };
    let graphs: Vec<_> = (0..64).map(|_| random_stable_graph(&mut rng, params)).collect();
    c.bench_function("canonical_form_x64", |b| {
        b.iter(|| graphs.iter().map(|g| canonical_form(g).certificate.len()).sum::<usize>())
    });
    c.bench_function("stratum_dimension_x64", |b| {
        b.iter(|| graphs.iter().map(|g| stratum_dimension(g).unwrap().even).sum::<i64>())
    });
}

fn lifting(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    c.bench_function("lift_tree_12_tails", |b| {
        b.iter_batched(
            || {
                let t = random_tree(&mut rng, 12);
                let ls: Vec<Label> = t.labeling.ns_labels.keys().cloned().collect();
                let p = random_partition(&mut rng, &ls);
                (t, p)
            },
            |(t, p)| lift_tree_coloring(&t, &p).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn operad(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let pairs: Vec<_> = (0..32).map(|_| random_composable_pair(&mut rng, GraphParams::default())).collect();
    c.bench_function("evaluate_and_compose_x32", |b| {
        b.iter(|| {
            for (h, f) in &pairs {
                let r = evaluate_operad(h).unwrap().then(&evaluate_operad(f).unwrap()).unwrap();
                assert_eq!(r.assignment.len(), h.source.graph.vertices.len());
            }
        })
    });
    let mut group = c.benchmark_group("axioms");
    group.sample_size(10);
    group.bench_function("check_operad_axioms_100", |b| b.iter(|| check_operad_axioms(0, 100)));
    group.finish();
}

criterion_group!(benches, enumeration, canonical, lifting, operad);
criterion_main!(benches);
