//! Graph morphisms: a contravariant flag injection, a covariant vertex
//! surjection and an involution pairing up the flags that get contracted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ordered, Edge, Graph, UnionFind};
use crate::ids::{FlagId, VertexId};
use crate::report::ValidationReport;

/// Access to the plain graph beneath a decorated one.
pub trait HasGraph {
    fn graph(&self) -> &Graph;
}

impl HasGraph for Graph {
    fn graph(&self) -> &Graph {
        self
    }
}

/// A morphism `source -> target`.
///
/// `flag_map` sends every target flag to a source flag, `vertex_map` sends
/// every source vertex to a target vertex, and `contracted` lists the orbits
/// of the contracted involution on the source flags missed by `flag_map`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism<G = Graph> {
    pub source: G,
    pub target: G,
    pub flag_map: BTreeMap<FlagId, FlagId>,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub contracted: BTreeSet<Edge>,
}

pub type GraphMorphism = Morphism<Graph>;

impl<G: HasGraph + Clone> Morphism<G> {
    pub fn identity(g: &G) -> Self {
        let inner = g.graph();
        Self {
            source: g.clone(),
            target: g.clone(),
            flag_map: inner.flags.iter().map(|f| (f.clone(), f.clone())).collect(),
            vertex_map: inner.vertices.iter().map(|v| (v.clone(), v.clone())).collect(),
            contracted: BTreeSet::new(),
        }
    }

    /// Builds a morphism with contracted pairs normalized.
    pub fn new(
        source: G,
        target: G,
        flag_map: BTreeMap<FlagId, FlagId>,
        vertex_map: BTreeMap<VertexId, VertexId>,
        contracted: impl IntoIterator<Item = (FlagId, FlagId)>,
    ) -> Self {
        Self {
            source,
            target,
            flag_map,
            vertex_map,
            contracted: contracted.into_iter().map(|(a, b)| ordered(a, b)).collect(),
        }
    }

    /// Replaces source and target by another decoration of the same graphs.
    pub fn map_objects<H>(&self, mut f: impl FnMut(&G) -> H) -> Morphism<H> {
        Morphism {
            source: f(&self.source),
            target: f(&self.target),
            flag_map: self.flag_map.clone(),
            vertex_map: self.vertex_map.clone(),
            contracted: self.contracted.clone(),
        }
    }

    /// The underlying plain morphism.
    pub fn plain(&self) -> GraphMorphism {
        self.map_objects(|g| g.graph().clone())
    }

    /// The contracted involution as a map on flags.
    pub fn contracted_involution(&self) -> BTreeMap<FlagId, FlagId> {
        self.contracted
            .iter()
            .flat_map(|(a, b)| [(a.clone(), b.clone()), (b.clone(), a.clone())])
            .collect()
    }

    pub fn image_flags(&self) -> BTreeSet<FlagId> {
        self.flag_map.values().cloned().collect()
    }

    /// Source tail pairs that become target edges without being contracted.
    pub fn grafted_pairs(&self) -> BTreeSet<Edge> {
        let (src, tgt) = (self.source.graph(), self.target.graph());
        tgt.edges()
            .into_iter()
            .filter_map(|(f, f2)| {
                let (a, b) = (&self.flag_map[&f], &self.flag_map[&f2]);
                (src.is_tail(a) && src.is_tail(b)).then(|| ordered(a.clone(), b.clone()))
            })
            .collect()
    }

    /// Checks the morphism axioms, including the ban on mergers.
    pub fn validate(&self) -> ValidationReport {
        let (src, tgt) = (self.source.graph(), self.target.graph());
        let mut report = ValidationReport::new();
        let sr = src.validate();
        if !sr.is_valid() {
            report.push("invalid source", sr.to_string());
        }
        let tr = tgt.validate();
        if !tr.is_valid() {
            report.push("invalid target", tr.to_string());
        }
        if !report.is_valid() {
            return report;
        }

        // flag map: total on target flags, into source flags, injective
        let keys: BTreeSet<&FlagId> = self.flag_map.keys().collect();
        let tflags: BTreeSet<&FlagId> = tgt.flags.iter().collect();
        if keys != tflags {
            report.push("flag map domain", "flag_map keys must be exactly the target flags");
        }
        let mut seen = BTreeSet::new();
        for (t, s) in &self.flag_map {
            if !src.flags.contains(s) {
                report.push("flag map range", format!("{t} -> {s}, not a source flag"));
            }
            if !seen.insert(s) {
                report.push("flag map not injective", format!("{s} is hit twice"));
            }
        }

        // vertex map: total on source vertices, onto target vertices
        let vkeys: BTreeSet<&VertexId> = self.vertex_map.keys().collect();
        let svs: BTreeSet<&VertexId> = src.vertices.iter().collect();
        if vkeys != svs {
            report.push("vertex map domain", "vertex_map keys must be exactly the source vertices");
        }
        for (s, t) in &self.vertex_map {
            if !tgt.vertices.contains(t) {
                report.push("vertex map range", format!("{s} -> {t}, not a target vertex"));
            }
        }
        let hit: BTreeSet<&VertexId> = self.vertex_map.values().collect();
        for v in &tgt.vertices {
            if !hit.contains(v) {
                report.push("vertex map not surjective", format!("{v} has no preimage"));
            }
        }
        if !report.is_valid() {
            return report;
        }

        // boundary compatibility and behaviour on tails / edges
        for f in &tgt.flags {
            let s = &self.flag_map[f];
            if self.vertex_map[&src.boundary[s]] != tgt.boundary[f] {
                report.push(
                    "boundary incompatible",
                    format!("target flag {f} at {} but {s} lands at {}", tgt.boundary[f], self.vertex_map[&src.boundary[s]]),
                );
            }
            if tgt.is_tail(f) {
                if !src.is_tail(s) {
                    report.push("tail pulls back to edge flag", format!("target tail {f} -> {s}"));
                }
            } else {
                let f2 = tgt.partner(f);
                let s2 = &self.flag_map[f2];
                let edge = src.partner(s) == s2;
                let graft = src.is_tail(s) && src.is_tail(s2);
                if !(edge || graft) {
                    report.push(
                        "edge pulls back badly",
                        format!("target edge ({f},{f2}) -> ({s},{s2}) is neither an edge nor two tails"),
                    );
                }
            }
        }

        // contracted involution
        let image = self.image_flags();
        let mut covered = BTreeSet::new();
        for (a, b) in &self.contracted {
            if a == b {
                report.push("contracted fixed point", format!("{a} is paired with itself"));
                continue;
            }
            for x in [a, b] {
                if !src.flags.contains(x) {
                    report.push("contracted unknown flag", format!("{x}"));
                } else if image.contains(x) {
                    report.push("contracted flag in image", format!("{x}"));
                }
                if !covered.insert(x.clone()) {
                    report.push("contracted flag repeated", format!("{x}"));
                }
            }
            if !src.flags.contains(a) || !src.flags.contains(b) {
                continue;
            }
            let edge = src.partner(a) == b;
            let tails = src.is_tail(a) && src.is_tail(b);
            if !(edge || tails) {
                report.push(
                    "contracted pair malformed",
                    format!("({a},{b}) is neither a source edge nor two tails"),
                );
            }
            if self.vertex_map[&src.boundary[a]] != self.vertex_map[&src.boundary[b]] {
                report.push(
                    "contracted pair split",
                    format!("({a},{b}) joins vertices with different images"),
                );
            }
        }
        for f in &src.flags {
            if !image.contains(f) && !covered.contains(f) {
                report.push("flag neither kept nor contracted", format!("{f}"));
            }
        }
        if !report.is_valid() {
            return report;
        }

        // vertices with the same image must be linked by contracted pairs
        let mut uf = UnionFind::new(src.vertices.iter().cloned());
        for (a, b) in &self.contracted {
            uf.union(&src.boundary[a], &src.boundary[b]);
        }
        let mut first: BTreeMap<&VertexId, VertexId> = BTreeMap::new();
        for (s, t) in &self.vertex_map {
            let root = uf.find(s);
            match first.get(t) {
                None => {
                    first.insert(t, root);
                }
                Some(r) if *r != root => report.push(
                    "merger",
                    format!("vertices over {t} are not linked by contracted edges"),
                ),
                Some(_) => {}
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result(Error::InvalidMorphism)
    }
}

impl<G: HasGraph + Clone + PartialEq> Morphism<G> {
    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &Morphism<G>) -> Result<Morphism<G>> {
        if self.target != next.source {
            return Err(Error::EndpointMismatch(
                "target of the first morphism differs from source of the second".into(),
            ));
        }
        let flag_map = next
            .flag_map
            .iter()
            .map(|(r, s)| (r.clone(), self.flag_map[s].clone()))
            .collect();
        let vertex_map = self
            .vertex_map
            .iter()
            .map(|(t, s)| (t.clone(), next.vertex_map[s].clone()))
            .collect();
        let mut contracted = self.contracted.clone();
        for (a, b) in &next.contracted {
            contracted.insert(ordered(self.flag_map[a].clone(), self.flag_map[b].clone()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: next.target.clone(),
            flag_map,
            vertex_map,
            contracted,
        })
    }
}

/// Composite of `h: τ → σ` followed by `f: σ → ρ`.
pub fn compose<G: HasGraph + Clone + PartialEq>(
    h: &Morphism<G>,
    f: &Morphism<G>,
) -> Result<Morphism<G>> {
    h.then(f)
}
