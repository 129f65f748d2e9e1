//! Genus labels, Neveu–Schwarz / Ramond colorings and tail labelings.
//!
//! Modular graphs are carried by the same type: an all-NS view with the
//! `modular` flag set and every tail label stored on the NS side.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::ids::{FlagId, Label, VertexId};
use crate::morphism::{HasGraph, Morphism};
use crate::report::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "NS")]
    Ns,
    #[serde(rename = "R")]
    R,
}

impl Color {
    pub const ALL: [Color; 2] = [Color::Ns, Color::R];

    pub fn as_str(self) -> &'static str {
        match self {
            Color::Ns => "NS",
            Color::R => "R",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusyLabeling {
    pub genus: BTreeMap<VertexId, u32>,
    pub color: BTreeMap<FlagId, Color>,
    /// `I_NS -> T_NS`
    pub ns_labels: BTreeMap<Label, FlagId>,
    /// `I_R -> T_R`
    pub r_labels: BTreeMap<Label, FlagId>,
}

impl SusyLabeling {
    pub fn labels(&self, color: Color) -> &BTreeMap<Label, FlagId> {
        match color {
            Color::Ns => &self.ns_labels,
            Color::R => &self.r_labels,
        }
    }

    pub fn labels_mut(&mut self, color: Color) -> &mut BTreeMap<Label, FlagId> {
        match color {
            Color::Ns => &mut self.ns_labels,
            Color::R => &mut self.r_labels,
        }
    }

    /// Label carried by a tail, if any.
    pub fn label_of(&self, f: &FlagId) -> Option<(Color, &Label)> {
        Color::ALL.into_iter().find_map(|c| {
            self.labels(c)
                .iter()
                .find(|(_, t)| *t == f)
                .map(|(l, _)| (c, l))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SusyGraph {
    pub graph: Graph,
    pub labeling: SusyLabeling,
    /// Colors erased: the graph stands for a modular graph.
    pub modular: bool,
}

impl HasGraph for SusyGraph {
    fn graph(&self) -> &Graph {
        &self.graph
    }
}

pub type SusyMorphism = Morphism<SusyGraph>;

/// Per-vertex stability value `2g(v) - 2 + #F(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub values: BTreeMap<VertexId, i64>,
}

impl StabilityReport {
    pub fn is_stable(&self) -> bool {
        self.values.values().all(|&x| x > 0)
    }

    pub fn unstable(&self) -> Vec<&VertexId> {
        self.values
            .iter()
            .filter(|(_, &x)| x <= 0)
            .map(|(v, _)| v)
            .collect()
    }
}

impl SusyGraph {
    pub fn new(graph: Graph, labeling: SusyLabeling) -> Self {
        Self {
            graph,
            labeling,
            modular: false,
        }
    }

    /// Labels every tail by its own flag identifier.
    pub fn self_labeled(
        graph: Graph,
        genus: BTreeMap<VertexId, u32>,
        color: BTreeMap<FlagId, Color>,
    ) -> Self {
        let mut labeling = SusyLabeling {
            genus,
            color,
            ..Default::default()
        };
        for t in graph.tails() {
            let c = labeling.color.get(&t).copied().unwrap_or(Color::Ns);
            labeling.labels_mut(c).insert(t.to_label(), t);
        }
        Self::new(graph, labeling)
    }

    /// A modular graph with the given genus labels and tail labels.
    pub fn modular(
        graph: Graph,
        genus: BTreeMap<VertexId, u32>,
        labels: BTreeMap<Label, FlagId>,
    ) -> Self {
        let color = graph.flags.iter().map(|f| (f.clone(), Color::Ns)).collect();
        Self {
            graph,
            labeling: SusyLabeling {
                genus,
                color,
                ns_labels: labels,
                r_labels: BTreeMap::new(),
            },
            modular: true,
        }
    }

    pub fn genus_of(&self, v: &VertexId) -> u32 {
        self.labeling.genus[v]
    }

    pub fn color_of(&self, f: &FlagId) -> Color {
        self.labeling.color[f]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = self.graph.validate();
        if !report.is_valid() {
            return report;
        }
        let g = &self.graph;
        let l = &self.labeling;
        for v in &g.vertices {
            if !l.genus.contains_key(v) {
                report.push("genus not total", format!("vertex {v} has no genus"));
            }
        }
        for v in l.genus.keys() {
            if !g.vertices.contains(v) {
                report.push("genus on unknown vertex", format!("{v}"));
            }
        }
        for f in &g.flags {
            match l.color.get(f) {
                None => report.push("color not total", format!("flag {f} has no color")),
                Some(&c) => {
                    if let Some(&cj) = l.color.get(g.partner(f)) {
                        if cj != c {
                            report.push(
                                "color not involution-compatible",
                                format!("{f} is {c} but its partner {} is {cj}", g.partner(f)),
                            );
                        }
                    }
                    if self.modular && c != Color::Ns {
                        report.push("modular graph with Ramond flag", format!("{f}"));
                    }
                }
            }
        }
        for f in l.color.keys() {
            if !g.flags.contains(f) {
                report.push("color on unknown flag", format!("{f}"));
            }
        }
        if !report.is_valid() {
            return report;
        }
        for (v, flags) in g.star_map() {
            let r = flags.iter().filter(|f| l.color[*f] == Color::R).count();
            if r % 2 != 0 {
                report.push("odd Ramond count at vertex", format!("vertex {v} has {r} Ramond flags"));
            }
        }
        for c in Color::ALL {
            let tails: BTreeSet<&FlagId> = g
                .tails()
                .iter()
                .filter(|t| l.color[*t] == c)
                .map(|t| g.flags.get(t).unwrap())
                .collect();
            let mut hit = BTreeSet::new();
            for (label, t) in l.labels(c) {
                if !tails.contains(t) {
                    report.push(
                        "label not on a tail of its color",
                        format!("{c} label {label} -> {t}"),
                    );
                }
                if !hit.insert(t) {
                    report.push("labeling not injective", format!("{c} tail {t} labeled twice"));
                }
            }
            for t in tails {
                if !hit.contains(t) {
                    report.push("unlabeled tail", format!("{c} tail {t}"));
                }
            }
        }
        if let Some(label) = l.ns_labels.keys().find(|k| l.r_labels.contains_key(*k)) {
            report.push("label sets overlap", format!("{label} is both NS and R"));
        }
        if self.modular && !l.r_labels.is_empty() {
            report.push("modular graph with Ramond labels", "r_labels must be empty");
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result(Error::InvalidGraph)
    }

    /// Genus of the graph: per component `Σ (g(v) - 1) + #E + 1`, summed.
    pub fn genus(&self) -> u64 {
        let mut comp_of: BTreeMap<&VertexId, usize> = BTreeMap::new();
        let comps = self.graph.components();
        for (i, c) in comps.iter().enumerate() {
            for v in c {
                comp_of.insert(v, i);
            }
        }
        let mut acc = vec![1i64; comps.len()];
        for (v, &g) in &self.labeling.genus {
            acc[comp_of[v]] += g as i64 - 1;
        }
        for (a, _) in self.graph.edges() {
            acc[comp_of[self.graph.vertex_of(&a)]] += 1;
        }
        acc.into_iter()
            .map(|x| {
                assert!(x >= 0, "negative component genus");
                x as u64
            })
            .sum()
    }

    pub fn stability(&self) -> StabilityReport {
        let values = self
            .graph
            .star_map()
            .into_iter()
            .map(|(v, fl)| {
                let g = self.labeling.genus[&v] as i64;
                (v, 2 * g - 2 + fl.len() as i64)
            })
            .collect();
        StabilityReport { values }
    }

    pub fn is_stable(&self) -> bool {
        self.stability().is_stable()
    }

    pub fn flags_of_color(&self, c: Color) -> BTreeSet<FlagId> {
        self.graph
            .flags
            .iter()
            .filter(|f| self.labeling.color[*f] == c)
            .cloned()
            .collect()
    }

    pub fn tails_of_color(&self, c: Color) -> BTreeSet<FlagId> {
        self.graph
            .tails()
            .into_iter()
            .filter(|f| self.labeling.color[f] == c)
            .collect()
    }

    pub fn edges_of_color(&self, c: Color) -> BTreeSet<Edge> {
        self.graph
            .edges()
            .into_iter()
            .filter(|(a, _)| self.labeling.color[a] == c)
            .collect()
    }

    /// Flags at `v` split into (NS, R).
    pub fn colored_star(&self, v: &VertexId) -> (BTreeSet<FlagId>, BTreeSet<FlagId>) {
        self.graph
            .flags_at_unchecked(v)
            .into_iter()
            .partition(|f| self.labeling.color[f] == Color::Ns)
    }

    /// Forgetful functor: colors erased, NS and R labels merged.
    pub fn forget(&self) -> SusyGraph {
        let mut labels = self.labeling.ns_labels.clone();
        labels.extend(self.labeling.r_labels.clone());
        SusyGraph::modular(self.graph.clone(), self.labeling.genus.clone(), labels)
    }

    /// Inclusion of modular graphs: every flag Neveu–Schwarz.
    pub fn include(modular: &SusyGraph) -> SusyGraph {
        let mut g = modular.forget();
        g.modular = false;
        g
    }

    /// Same graph with every tail labeled by its own flag identifier.
    pub fn relabeled_by_flags(&self) -> SusyGraph {
        let mut g = SusyGraph::self_labeled(
            self.graph.clone(),
            self.labeling.genus.clone(),
            self.labeling.color.clone(),
        );
        g.modular = self.modular;
        g
    }

    /// Corolla of `v` with all its flags as self-labeled tails.
    pub fn star(&self, v: &VertexId) -> SusyGraph {
        let graph = self.graph.star(v);
        self.restricted_to(graph)
    }

    /// Decorations of `self` restricted to a graph on a subset of its
    /// flags and vertices. Tails that were labeled keep their label; new
    /// tails are labeled by their flag identifier, `~`-prefixed until it
    /// clashes with no label of `self`.
    pub(crate) fn restricted_to(&self, graph: Graph) -> SusyGraph {
        let genus = graph
            .vertices
            .iter()
            .map(|v| (v.clone(), self.labeling.genus[v]))
            .collect();
        let color: BTreeMap<FlagId, Color> = graph
            .flags
            .iter()
            .map(|f| (f.clone(), self.labeling.color[f]))
            .collect();
        let mut labeling = SusyLabeling {
            genus,
            color,
            ..Default::default()
        };
        let mut fresh = Vec::new();
        for t in graph.tails() {
            match self.labeling.label_of(&t) {
                Some((c, l)) if self.graph.is_tail(&t) => {
                    labeling.labels_mut(c).insert(l.clone(), t);
                }
                _ => fresh.push(t),
            }
        }
        for t in fresh {
            let c = labeling.color[&t];
            let mut label = t.to_label();
            let taken = |l: &Label| {
                Color::ALL.into_iter().any(|c| {
                    labeling.labels(c).contains_key(l) || self.labeling.labels(c).contains_key(l)
                })
            };
            while taken(&label) {
                label = Label(format!("~{label}"));
            }
            labeling.labels_mut(c).insert(label, t);
        }
        SusyGraph {
            graph,
            labeling,
            modular: self.modular,
        }
    }

    /// Union of SUSY graphs with pairwise disjoint identifiers and labels.
    pub fn union_disjoint(parts: impl IntoIterator<Item = SusyGraph>) -> Result<SusyGraph> {
        let parts: Vec<SusyGraph> = parts.into_iter().collect();
        let modular = parts.first().map(|p| p.modular).unwrap_or(false);
        let graph = Graph::union_disjoint(parts.iter().map(|p| p.graph.clone()))?;
        let mut labeling = SusyLabeling::default();
        for p in parts {
            if p.modular != modular {
                return Err(Error::Inconsistent("modular and SUSY parts mixed".into()));
            }
            labeling.genus.extend(p.labeling.genus.clone());
            labeling.color.extend(p.labeling.color.clone());
            for c in Color::ALL {
                for (l, f) in p.labeling.labels(c) {
                    if labeling.labels_mut(c).insert(l.clone(), f.clone()).is_some() {
                        return Err(Error::Label(format!("label {l} occurs in two parts")));
                    }
                }
            }
        }
        Ok(SusyGraph {
            graph,
            labeling,
            modular,
        })
    }
}

impl SusyMorphism {
    /// Graph axioms plus preservation of genus labels and colors.
    pub fn validate_susy(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (name, g) in [("source", &self.source), ("target", &self.target)] {
            let r = g.validate();
            if !r.is_valid() {
                report.push(
                    if name == "source" { "invalid source" } else { "invalid target" },
                    r.to_string(),
                );
            }
        }
        if self.source.modular != self.target.modular {
            report.push("category mismatch", "modular and SUSY endpoints mixed");
        }
        if !report.is_valid() {
            return report;
        }
        report.extend(self.validate());
        if !report.is_valid() {
            return report;
        }
        let (s, t) = (&self.source, &self.target);
        for (f, sf) in &self.flag_map {
            if t.color_of(f) != s.color_of(sf) {
                report.push("color not preserved", format!("{f} -> {sf}"));
            }
        }
        for (a, b) in &self.contracted {
            if s.color_of(a) != s.color_of(b) {
                report.push("contracted pair of mixed color", format!("({a},{b})"));
            }
        }
        // g(v) = Σ g(w) + #pairs over v - (#preimages - 1)
        let mut expected: BTreeMap<&VertexId, i64> =
            t.graph.vertices.iter().map(|v| (v, 1)).collect();
        for (w, v) in &self.vertex_map {
            *expected.get_mut(v).unwrap() += s.genus_of(w) as i64 - 1;
        }
        for (a, _) in &self.contracted {
            *expected.get_mut(&self.vertex_map[s.graph.vertex_of(a)]).unwrap() += 1;
        }
        for (v, e) in expected {
            if e != t.genus_of(v) as i64 {
                report.push(
                    "genus not preserved",
                    format!("vertex {v} has genus {} but preimages give {e}", t.genus_of(v)),
                );
            }
        }
        report
    }

    pub fn ensure_valid_susy(&self) -> Result<()> {
        self.validate_susy().into_result(Error::InvalidMorphism)
    }

    /// Every labeled target tail pulls back to the source tail with the same label.
    pub fn preserves_tail_labels(&self) -> bool {
        Color::ALL.into_iter().all(|c| {
            self.target.labeling.labels(c).iter().all(|(label, f)| {
                self.source.labeling.labels(c).get(label) == Some(&self.flag_map[f])
            })
        })
    }

    pub fn forget(&self) -> SusyMorphism {
        self.map_objects(SusyGraph::forget)
    }

    pub fn include(h: &SusyMorphism) -> SusyMorphism {
        h.map_objects(SusyGraph::include)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn genus_map(pairs: &[(&str, u32)]) -> BTreeMap<VertexId, u32> {
        pairs.iter().map(|(v, g)| (VertexId::from(*v), *g)).collect()
    }

    fn all_ns(g: &Graph) -> BTreeMap<FlagId, Color> {
        g.flags.iter().map(|f| (f.clone(), Color::Ns)).collect()
    }

    /// b1 by counting edges outside a spanning forest built by DFS.
    fn betti_by_spanning_forest(g: &Graph) -> i64 {
        let mut seen = BTreeSet::new();
        let mut tree_edges = 0i64;
        for start in &g.vertices {
            if !seen.insert(start.clone()) {
                continue;
            }
            let mut stack = vec![start.clone()];
            while let Some(v) = stack.pop() {
                for f in g.flags_at_unchecked(&v) {
                    let j = g.partner(&f);
                    if j == &f {
                        continue;
                    }
                    let w = g.vertex_of(j).clone();
                    if seen.insert(w.clone()) {
                        tree_edges += 1;
                        stack.push(w);
                    }
                }
            }
        }
        g.edge_count() as i64 - tree_edges
    }

    fn genus_oracle(s: &SusyGraph) -> i64 {
        s.labeling.genus.values().map(|&g| g as i64).sum::<i64>() + betti_by_spanning_forest(&s.graph)
    }

    #[test]
    fn genus_of_corolla() {
        let g = Graph::corolla("v", ["t"]);
        let s = SusyGraph::self_labeled(g.clone(), genus_map(&[("v", 2)]), all_ns(&g));
        assert_eq!(s.genus(), 2);
    }

    #[test]
    fn genus_of_two_vertex_edge() {
        let mut g = Graph::empty();
        g.add_edge("a", "u", "b", "w");
        let s = SusyGraph::self_labeled(g.clone(), genus_map(&[("u", 1), ("w", 0)]), all_ns(&g));
        assert_eq!(s.genus(), 1);
        assert_eq!(s.genus() as i64, genus_oracle(&s));
    }

    #[test]
    fn genus_of_double_loop() {
        let mut g = Graph::corolla("v", ["a", "b", "c", "d"]);
        g.join("a", "b");
        g.join("c", "d");
        let s = SusyGraph::self_labeled(g.clone(), genus_map(&[("v", 0)]), all_ns(&g));
        assert_eq!(s.genus(), 2);
        assert_eq!(s.genus() as i64, genus_oracle(&s));
    }

    #[test]
    fn stability_boundary_cases() {
        let cases = [(0, 3, true), (1, 0, false), (1, 1, true), (0, 2, false)];
        for (genus, nflags, stable) in cases {
            let tails: Vec<String> = (0..nflags).map(|i| format!("t{i}")).collect();
            let g = Graph::corolla("v", tails);
            let s = SusyGraph::self_labeled(g.clone(), genus_map(&[("v", genus)]), all_ns(&g));
            assert_eq!(s.is_stable(), stable, "g={genus} #F={nflags}");
        }
    }

    #[test]
    fn odd_ramond_vertex_rejected() {
        let g = Graph::corolla("v", ["a", "b", "c"]);
        let mut color = all_ns(&g);
        color.insert("a".into(), Color::R);
        let s = SusyGraph::self_labeled(g, genus_map(&[("v", 0)]), color);
        assert!(s.validate().has("odd Ramond count at vertex"));
    }

    #[test]
    fn color_must_respect_involution() {
        let mut g = Graph::corolla("v", ["a", "b", "c"]);
        g.join("a", "b");
        let mut color = all_ns(&g);
        color.insert("a".into(), Color::R);
        let s = SusyGraph::self_labeled(g, genus_map(&[("v", 0)]), color);
        assert!(s.validate().has("color not involution-compatible"));
    }

    #[test]
    fn forget_merges_labels() {
        let g = Graph::corolla("v", ["f1", "f2", "f3", "f4"]);
        let mut color = all_ns(&g);
        color.insert("f3".into(), Color::R);
        color.insert("f4".into(), Color::R);
        let labeling = SusyLabeling {
            genus: genus_map(&[("v", 0)]),
            color,
            ns_labels: [("1".into(), "f1".into()), ("2".into(), "f2".into())].into(),
            r_labels: [("3".into(), "f3".into()), ("4".into(), "f4".into())].into(),
        };
        let s = SusyGraph::new(g, labeling);
        assert!(s.validate().is_valid());
        let m = s.forget();
        assert!(m.modular);
        assert!(m.validate().is_valid());
        let labels: Vec<&str> = m.labeling.ns_labels.keys().map(|l| l.as_str()).collect();
        assert_eq!(labels, ["1", "2", "3", "4"]);
        assert!(m.flags_of_color(Color::R).is_empty());
        assert_eq!(m.genus(), s.genus());
    }

    #[test]
    fn forget_after_include_is_identity() {
        let mut g = Graph::corolla("v", ["a", "b", "t"]);
        g.join("a", "b");
        let m = SusyGraph::modular(g, genus_map(&[("v", 1)]), [("1".into(), "t".into())].into());
        let inc = SusyGraph::include(&m);
        assert!(!inc.modular);
        assert!(inc.flags_of_color(Color::R).is_empty());
        assert_eq!(inc.forget(), m);
    }
}
