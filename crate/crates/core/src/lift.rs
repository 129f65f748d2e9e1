//! Lifting modular graphs to SUSY graphs: choosing which tails are Ramond
//! and solving the per-vertex Ramond parity for the edge colors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitRow, ParitySystem, Solutions};
use crate::graph::Edge;
use crate::ids::{FlagId, Label, VertexId};
use crate::susy::{Color, SusyGraph, SusyLabeling};

/// Split `I = I_NS ⊔ I_R` of the tail labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailPartition {
    pub ns: BTreeSet<Label>,
    pub r: BTreeSet<Label>,
}

impl TailPartition {
    pub fn new<I, J, S, T>(ns: I, r: J) -> Self
    where
        I: IntoIterator<Item = S>,
        J: IntoIterator<Item = T>,
        S: Into<Label>,
        T: Into<Label>,
    {
        Self {
            ns: ns.into_iter().map(Into::into).collect(),
            r: r.into_iter().map(Into::into).collect(),
        }
    }

    pub fn color_of(&self, l: &Label) -> Option<Color> {
        if self.r.contains(l) {
            Some(Color::R)
        } else if self.ns.contains(l) {
            Some(Color::Ns)
        } else {
            None
        }
    }
}

/// All tail labels of a graph regardless of color.
fn merged_labels(g: &SusyGraph) -> BTreeMap<Label, FlagId> {
    let mut labels = g.labeling.ns_labels.clone();
    labels.extend(g.labeling.r_labels.clone());
    labels
}

/// Checks the partition against the graph's labels and returns the tail colors.
fn tail_colors(g: &SusyGraph, partition: &TailPartition) -> Result<BTreeMap<FlagId, Color>> {
    if let Some(l) = partition.ns.intersection(&partition.r).next() {
        return Err(Error::Label(format!("{l} is in both I_NS and I_R")));
    }
    if !partition.r.len().is_multiple_of(2) {
        return Err(Error::OddRamond(partition.r.len()));
    }
    let labels = merged_labels(g);
    let mut colors = BTreeMap::new();
    for (l, f) in &labels {
        let c = partition
            .color_of(l)
            .ok_or_else(|| Error::Label(format!("tail label {l} missing from the partition")))?;
        colors.insert(f.clone(), c);
    }
    if let Some(l) = partition.ns.iter().chain(&partition.r).find(|l| !labels.contains_key(*l)) {
        return Err(Error::Label(format!("partition label {l} is not a tail label")));
    }
    Ok(colors)
}

/// Builds the SUSY graph with the given tail and edge colors.
fn colored(
    g: &SusyGraph,
    partition: &TailPartition,
    mut colors: BTreeMap<FlagId, Color>,
    edge_colors: impl IntoIterator<Item = (Edge, Color)>,
) -> SusyGraph {
    for ((a, b), c) in edge_colors {
        colors.insert(a, c);
        colors.insert(b, c);
    }
    let labels = merged_labels(g);
    let mut labeling = SusyLabeling {
        genus: g.labeling.genus.clone(),
        color: colors,
        ..Default::default()
    };
    for (l, f) in labels {
        let c = partition.color_of(&l).expect("checked by tail_colors");
        labeling.labels_mut(c).insert(l, f);
    }
    SusyGraph::new(g.graph.clone(), labeling)
}

fn ensure_stable_tree(t: &SusyGraph) -> Result<()> {
    t.ensure_valid()?;
    if !t.graph.is_connected() {
        return Err(Error::NotATree("graph is disconnected".into()));
    }
    if t.genus() != 0 {
        return Err(Error::NotATree(format!("genus is {}", t.genus())));
    }
    let st = t.stability();
    if !st.is_stable() {
        return Err(Error::Unstable(format!("unstable vertices {:?}", st.unstable())));
    }
    Ok(())
}

/// The unique SUSY structure on a stable tree with the given NS/R split of
/// its tails.
///
/// Peels leaves: a vertex bounding exactly one remaining edge fixes that
/// edge's color from the parity of the Ramond flags already colored there.
/// Ties go to the lexicographically smallest vertex.
pub fn lift_tree_coloring(t: &SusyGraph, partition: &TailPartition) -> Result<SusyGraph> {
    ensure_stable_tree(t)?;
    let colors = tail_colors(t, partition)?;
    let g = &t.graph;

    let mut remaining: BTreeMap<VertexId, BTreeSet<FlagId>> = BTreeMap::new();
    for (a, b) in g.edges() {
        remaining.entry(g.vertex_of(&a).clone()).or_default().insert(a);
        remaining.entry(g.vertex_of(&b).clone()).or_default().insert(b);
    }
    let mut ramond: BTreeMap<VertexId, usize> = g.vertices.iter().map(|v| (v.clone(), 0)).collect();
    for (f, c) in &colors {
        if *c == Color::R {
            *ramond.get_mut(g.vertex_of(f)).unwrap() += 1;
        }
    }
    let mut queue: BTreeSet<VertexId> = remaining
        .iter()
        .filter(|(_, fs)| fs.len() == 1)
        .map(|(v, _)| v.clone())
        .collect();
    let mut edge_colors = Vec::new();
    while let Some(v) = queue.pop_first() {
        let Some(flags) = remaining.get(&v) else { continue };
        if flags.len() != 1 {
            continue;
        }
        let f = flags.first().unwrap().clone();
        let partner = g.partner(&f).clone();
        let w = g.vertex_of(&partner).clone();
        let c = if ramond[&v] % 2 == 1 { Color::R } else { Color::Ns };
        if c == Color::R {
            *ramond.get_mut(&v).unwrap() += 1;
            *ramond.get_mut(&w).unwrap() += 1;
        }
        remaining.remove(&v);
        let wf = remaining.get_mut(&w).unwrap();
        wf.remove(&partner);
        if wf.len() == 1 {
            queue.insert(w.clone());
        } else if wf.is_empty() {
            remaining.remove(&w);
        }
        edge_colors.push((crate::graph::ordered(f, partner), c));
    }
    debug_assert!(remaining.is_empty());
    if let Some((v, _)) = ramond.iter().find(|(_, n)| *n % 2 == 1) {
        return Err(Error::Inconsistent(format!("parity fails at {v} after peeling")));
    }
    let lifted = colored(t, partition, colors, edge_colors);
    debug_assert!(lifted.validate().is_valid());
    Ok(lifted)
}

/// `2^(k-1)` even-size subsets of a `k`-set (one for `k = 0`).
pub fn count_even_partitions(k: usize) -> Result<u64> {
    if k == 0 {
        return Ok(1);
    }
    1u64.checked_shl((k - 1) as u32)
        .filter(|_| k <= 64)
        .ok_or(Error::Overflow)
}

/// Number of SUSY trees over a stable modular tree: `2^(#T - 1)`.
pub fn count_lifts(t: &SusyGraph) -> Result<u64> {
    ensure_stable_tree(t)?;
    count_even_partitions(t.graph.tails().len())
}

/// Parity system in the non-loop edge variables; loops are free.
struct EdgeSystem {
    edges: Vec<Edge>,
    loops: Vec<Edge>,
    solutions: Option<Solutions>,
}

fn edge_system(g: &SusyGraph, colors: &BTreeMap<FlagId, Color>) -> EdgeSystem {
    let (loops, edges): (Vec<Edge>, Vec<Edge>) =
        g.graph.edges().into_iter().partition(|e| g.graph.is_loop(e));
    let mut sys = ParitySystem::new(edges.len());
    for (v, flags) in g.graph.star_map() {
        let vars = edges.iter().enumerate().filter_map(|(i, (a, b))| {
            (g.graph.vertex_of(a) == &v || g.graph.vertex_of(b) == &v).then_some(i)
        });
        let rhs = flags
            .iter()
            .filter(|f| colors.get(*f) == Some(&Color::R))
            .count()
            % 2
            == 1;
        sys.add_equation(vars, rhs);
    }
    EdgeSystem {
        edges,
        loops,
        solutions: sys.solve(),
    }
}

/// Number of edge colorings making `g` a SUSY graph under the given tail split.
pub fn lift_count_general(g: &SusyGraph, partition: &TailPartition) -> Result<u64> {
    g.ensure_valid()?;
    let colors = tail_colors(g, partition)?;
    let sys = edge_system(g, &colors);
    let Some(sol) = sys.solutions else { return Ok(0) };
    1u64.checked_shl((sol.dimension() + sys.loops.len()) as u32)
        .filter(|_| sol.dimension() + sys.loops.len() < 64)
        .ok_or(Error::Overflow)
}

/// `0` if some component carries an odd number of Ramond tails, else `2^(b1)`.
pub fn lift_count_closed_form(g: &SusyGraph, partition: &TailPartition) -> Result<u64> {
    let colors = tail_colors(g, partition)?;
    let comps = g.graph.components();
    for comp in &comps {
        let r = colors
            .iter()
            .filter(|(f, c)| **c == Color::R && comp.contains(g.graph.vertex_of(f)))
            .count();
        if r % 2 == 1 {
            return Ok(0);
        }
    }
    let b1 = g.graph.edge_count() + comps.len() - g.graph.vertices.len();
    Ok(1u64 << b1)
}

/// Every SUSY graph over `g` with the given tail split, loops varying fastest.
pub fn edge_colorings(g: &SusyGraph, partition: &TailPartition) -> Result<Vec<SusyGraph>> {
    g.ensure_valid()?;
    let colors = tail_colors(g, partition)?;
    let sys = edge_system(g, &colors);
    let Some(sol) = sys.solutions else { return Ok(Vec::new()) };
    let nloops = sys.loops.len();
    assert!(nloops < 32, "too many loops to enumerate");
    let mut out = Vec::new();
    for x in sol.iter() {
        for mask in 0u32..1 << nloops {
            let edge_colors = sys
                .edges
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), bit_color(&x, i)))
                .chain(sys.loops.iter().enumerate().map(|(i, e)| {
                    (e.clone(), if mask >> i & 1 == 1 { Color::R } else { Color::Ns })
                }));
            out.push(colored(g, partition, colors.clone(), edge_colors));
        }
    }
    Ok(out)
}

fn bit_color(x: &BitRow, i: usize) -> Color {
    if x.get(i) {
        Color::R
    } else {
        Color::Ns
    }
}
