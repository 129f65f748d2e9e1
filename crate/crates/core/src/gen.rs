//! Random stable graphs, morphisms and curve configurations for testing
//! and benchmarking.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::calculus::{contract, graft, isomorphism};
use crate::dual::{Component, CurveConfig, PointKind, SpecialPoint};
use crate::graph::{Edge, Graph};
use crate::ids::{FlagId, Label, VertexId};
use crate::lift::{edge_colorings, TailPartition};
use crate::susy::{Color, SusyGraph, SusyMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphParams {
    pub max_genus: u32,
    pub max_tails: usize,
    /// Upper bound on the number of degenerations, hence on edges.
    pub max_edges: usize,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            max_genus: 2,
            max_tails: 5,
            max_edges: 5,
        }
    }
}

fn fresh<T: From<String> + Ord>(taken: &BTreeSet<T>, stem: &str) -> T {
    (0..)
        .map(|k| T::from(format!("{stem}{k}")))
        .find(|s| !taken.contains(s))
        .expect("unbounded supply")
}

fn all_ns(g: Graph, genus: BTreeMap<VertexId, u32>) -> SusyGraph {
    let color = g.flags.iter().map(|f| (f.clone(), Color::Ns)).collect();
    SusyGraph::self_labeled(g, genus, color)
}

/// A stable genus-zero tree with between 3 and `max_tails` tails, all NS.
pub fn random_tree<R: Rng>(rng: &mut R, max_tails: usize) -> SusyGraph {
    assert!(max_tails >= 3, "a stable tree needs three tails");
    let n = rng.random_range(3..=max_tails);
    let mut g = Graph::corolla("v0", (0..n).map(|i| format!("t{i}")));
    let splits = rng.random_range(0..=n - 3);
    for k in 0..splits {
        let big: Vec<VertexId> = g
            .star_map()
            .into_iter()
            .filter(|(_, fs)| fs.len() >= 4)
            .map(|(v, _)| v)
            .collect();
        let Some(v) = big.choose(rng).cloned() else { break };
        let mut flags = g.flags_at(&v).expect("vertex exists").into_iter().collect::<Vec<_>>();
        flags.shuffle(rng);
        let moved = rng.random_range(2..=flags.len() - 2);
        let w = VertexId(format!("v{}", k + 1));
        g.add_vertex(w.clone());
        for f in &flags[..moved] {
            g.boundary.insert(f.clone(), w.clone());
        }
        g.add_edge(format!("e{k}a"), v, format!("e{k}b"), w);
    }
    let genus = g.vertices.iter().map(|v| (v.clone(), 0)).collect();
    all_ns(g, genus)
}

/// One random degeneration (the inverse of contracting one edge), or
/// `None` when none was found.
fn degenerate<R: Rng>(rng: &mut R, g: &SusyGraph) -> Option<SusyGraph> {
    let v = g.graph.vertices.iter().collect::<Vec<_>>().choose(rng).copied()?.clone();
    let gv = g.genus_of(&v);
    let x: FlagId = fresh(&g.graph.flags, "h");
    let mut taken = g.graph.flags.clone();
    taken.insert(x.clone());
    let y: FlagId = fresh(&taken, "h");
    let mut h = g.clone();
    h.labeling.color.insert(x.clone(), Color::Ns);
    h.labeling.color.insert(y.clone(), Color::Ns);
    if gv >= 1 && rng.random_bool(0.4) {
        h.graph.add_flag(x.clone(), v.clone());
        h.graph.add_flag(y.clone(), v.clone());
        h.graph.join(x, y);
        h.labeling.genus.insert(v, gv - 1);
        return Some(h);
    }
    let flags: Vec<FlagId> = g.graph.flags_at(&v).ok()?.into_iter().collect();
    for _ in 0..20 {
        let g1 = rng.random_range(0..=gv);
        let mask: Vec<bool> = flags.iter().map(|_| rng.random_bool(0.5)).collect();
        let moved = mask.iter().filter(|m| **m).count() as i64;
        let stays = flags.len() as i64 - moved;
        if 2 * g1 as i64 - 1 + stays <= 0 || 2 * (gv - g1) as i64 - 1 + moved <= 0 {
            continue;
        }
        let w: VertexId = fresh(&g.graph.vertices, "v");
        h.graph.add_vertex(w.clone());
        for (f, m) in flags.iter().zip(&mask) {
            if *m {
                h.graph.boundary.insert(f.clone(), w.clone());
            }
        }
        h.graph.add_edge(x, v.clone(), y, w.clone());
        h.labeling.genus.insert(v, g1);
        h.labeling.genus.insert(w, gv - g1);
        return Some(h);
    }
    None
}

/// A random even split of the given labels.
pub fn random_partition<R: Rng>(rng: &mut R, labels: &[Label]) -> TailPartition {
    let mut shuffled = labels.to_vec();
    shuffled.shuffle(rng);
    let r = 2 * rng.random_range(0..=labels.len() / 2);
    TailPartition::new(shuffled[r..].iter().cloned(), shuffled[..r].iter().cloned())
}

/// A stable modular graph (all flags NS, tails labeled by their flags).
pub fn random_modular_graph<R: Rng>(rng: &mut R, params: GraphParams) -> SusyGraph {
    let genus = rng.random_range(0..=params.max_genus);
    let min_tails = match genus {
        0 => 3,
        1 => 1,
        _ => 0,
    };
    let n = rng.random_range(min_tails..=params.max_tails.max(min_tails));
    let mut g = all_ns(
        Graph::corolla("v0", (0..n).map(|i| format!("t{i}"))),
        [("v0".into(), genus)].into(),
    );
    let room = (3 * genus as usize + n).saturating_sub(3).min(params.max_edges);
    for _ in 0..rng.random_range(0..=room) {
        if let Some(h) = degenerate(rng, &g) {
            g = h;
        }
    }
    g
}

/// A stable SUSY graph: a random modular graph with a random even tail split
/// and a random compatible edge coloring.
pub fn random_stable_graph<R: Rng>(rng: &mut R, params: GraphParams) -> SusyGraph {
    let g = random_modular_graph(rng, params);
    let labels: Vec<Label> = g.labeling.ns_labels.keys().cloned().collect();
    let partition = random_partition(rng, &labels);
    let options = edge_colorings(&g, &partition).expect("a stable connected graph lifts");
    options.choose(rng).expect("even splits always lift").clone()
}

fn pick_pair<R: Rng>(rng: &mut R, tails: &[FlagId]) -> Option<Edge> {
    if tails.len() < 2 {
        return None;
    }
    let two: Vec<&FlagId> = tails.choose_multiple(rng, 2).collect();
    Some(crate::graph::ordered(two[0].clone(), two[1].clone()))
}

fn same_color_pair<R: Rng>(rng: &mut R, g: &SusyGraph, avoid: &BTreeSet<FlagId>) -> Option<Edge> {
    let c = if rng.random_bool(0.5) { Color::Ns } else { Color::R };
    let tails: Vec<FlagId> = g.tails_of_color(c).into_iter().filter(|f| !avoid.contains(f)).collect();
    pick_pair(rng, &tails)
}

/// A random morphism out of `source`: optionally a grafting, then a
/// contraction of random edges (possibly plus a virtual contraction), then
/// optionally a renaming.
pub fn random_morphism<R: Rng>(rng: &mut R, source: &SusyGraph) -> SusyMorphism {
    let mut h = SusyMorphism::identity(source);
    if rng.random_bool(0.25) {
        if let Some(pair) = same_color_pair(rng, &h.target, &BTreeSet::new()) {
            h = h.then(&graft(&h.target, &[pair]).expect("same-color tails graft")).expect("composable");
        }
    }
    let cur = h.target.clone();
    let mut pairs: Vec<Edge> = cur.graph.edges().into_iter().filter(|_| rng.random_bool(0.4)).collect();
    if rng.random_bool(0.2) {
        if let Some(pair) = same_color_pair(rng, &cur, &BTreeSet::new()) {
            pairs.push(pair);
        }
    }
    pairs.shuffle(rng);
    if !pairs.is_empty() {
        h = h.then(&contract(&cur, &pairs).expect("valid pairs")).expect("composable");
    }
    if rng.random_bool(0.5) {
        h = h.then(&random_renaming(rng, &h.target)).expect("composable");
    }
    h
}

/// An isomorphism renaming every flag and vertex to fresh identifiers.
pub fn random_renaming<R: Rng>(rng: &mut R, g: &SusyGraph) -> SusyMorphism {
    let mut flags: Vec<&FlagId> = g.graph.flags.iter().collect();
    flags.shuffle(rng);
    let stem = format!("r{}_", rng.random_range(0..1000));
    let flag_rename = flags
        .into_iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), FlagId(format!("{stem}f{i}"))))
        .collect();
    let mut vertices: Vec<&VertexId> = g.graph.vertices.iter().collect();
    vertices.shuffle(rng);
    let vertex_rename = vertices
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), VertexId(format!("{stem}v{i}"))))
        .collect();
    isomorphism(g, &flag_rename, &vertex_rename).expect("fresh names are injective")
}

/// `(h, f)` with `h.target == f.source`.
pub fn random_composable_pair<R: Rng>(rng: &mut R, params: GraphParams) -> (SusyMorphism, SusyMorphism) {
    let g = random_stable_graph(rng, params);
    let h = random_morphism(rng, &g);
    let f = random_morphism(rng, &h.target);
    (h, f)
}

/// A curve configuration whose dual graph is a random stable SUSY graph,
/// with components and points listed in random order.
pub fn random_curve_config<R: Rng>(rng: &mut R, params: GraphParams) -> CurveConfig {
    let g = random_stable_graph(rng, params);
    let mut vertices: Vec<&VertexId> = g.graph.vertices.iter().collect();
    vertices.shuffle(rng);
    let components = vertices
        .into_iter()
        .map(|v| {
            let mut special_points: Vec<SpecialPoint> = g
                .graph
                .flags_at(v)
                .expect("vertex exists")
                .into_iter()
                .map(|f| {
                    let tail = g.graph.is_tail(&f);
                    let label = g.labeling.label_of(&f).map(|(_, l)| l.clone());
                    SpecialPoint {
                        color: g.color_of(&f),
                        kind: if tail { PointKind::Puncture } else { PointKind::Node },
                        label: label.filter(|_| rng.random_bool(0.5)),
                        id: f,
                    }
                })
                .collect();
            special_points.shuffle(rng);
            Component {
                id: Some(v.clone()),
                genus: g.genus_of(v),
                special_points,
            }
        })
        .collect();
    let mut node_pairing: Vec<(FlagId, FlagId)> = g
        .graph
        .edges()
        .into_iter()
        .map(|(a, b)| if rng.random_bool(0.5) { (a, b) } else { (b, a) })
        .collect();
    node_pairing.shuffle(rng);
    CurveConfig {
        components,
        node_pairing,
    }
}
