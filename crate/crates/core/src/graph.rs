//! Graphs as flags, vertices, a boundary map and an involution.
//!
//! A flag fixed by the involution is a tail; a two-element orbit is an edge.
//! Isolated vertices are allowed here and rejected by stability checks later.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{tagged, FlagId, VertexId};
use crate::report::ValidationReport;

/// An edge as an ordered pair of flags, smaller identifier first.
pub type Edge = (FlagId, FlagId);

pub(crate) fn ordered<T: Ord>(a: T, b: T) -> (T, T) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub flags: BTreeSet<FlagId>,
    pub vertices: BTreeSet<VertexId>,
    pub boundary: BTreeMap<FlagId, VertexId>,
    pub involution: BTreeMap<FlagId, FlagId>,
}

impl Graph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A single vertex carrying the given tails.
    pub fn corolla<I, S>(vertex: impl Into<VertexId>, tails: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<FlagId>,
    {
        let mut g = Graph::empty();
        let v = vertex.into();
        g.vertices.insert(v.clone());
        for t in tails {
            g.add_flag(t.into(), v.clone());
        }
        g
    }

    pub fn add_vertex(&mut self, v: impl Into<VertexId>) {
        self.vertices.insert(v.into());
    }

    /// Adds a tail at `v`. The vertex is created if missing.
    pub fn add_flag(&mut self, f: impl Into<FlagId>, v: impl Into<VertexId>) {
        let (f, v) = (f.into(), v.into());
        self.vertices.insert(v.clone());
        self.flags.insert(f.clone());
        self.boundary.insert(f.clone(), v);
        self.involution.insert(f.clone(), f);
    }

    /// Pairs two existing flags into an edge.
    pub fn join(&mut self, a: impl Into<FlagId>, b: impl Into<FlagId>) {
        let (a, b) = (a.into(), b.into());
        self.involution.insert(a.clone(), b.clone());
        self.involution.insert(b, a);
    }

    /// Adds an edge `a -- b` with `a` at `u` and `b` at `w`.
    pub fn add_edge(
        &mut self,
        a: impl Into<FlagId>,
        u: impl Into<VertexId>,
        b: impl Into<FlagId>,
        w: impl Into<VertexId>,
    ) {
        let (a, b) = (a.into(), b.into());
        self.add_flag(a.clone(), u);
        self.add_flag(b.clone(), w);
        self.join(a, b);
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for f in &self.flags {
            match self.boundary.get(f) {
                None => report.push("boundary not total", format!("flag {f} has no vertex")),
                Some(v) if !self.vertices.contains(v) => report.push(
                    "boundary outside vertices",
                    format!("flag {f} bounds to unknown vertex {v}"),
                ),
                Some(_) => {}
            }
            match self.involution.get(f) {
                None => report.push("involution not total", format!("flag {f} has no image")),
                Some(j) if !self.flags.contains(j) => report.push(
                    "involution outside flags",
                    format!("flag {f} maps to unknown flag {j}"),
                ),
                Some(j) => {
                    if self.involution.get(j) != Some(f) {
                        report.push(
                            "involution not involutive",
                            format!("{f} -> {j} but {j} does not map back to {f}"),
                        );
                    }
                }
            }
        }
        for f in self.boundary.keys().chain(self.involution.keys()) {
            if !self.flags.contains(f) {
                report.push("unknown flag", format!("map entry for undeclared flag {f}"));
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result(Error::InvalidGraph)
    }

    pub fn partner(&self, f: &FlagId) -> &FlagId {
        &self.involution[f]
    }

    pub fn vertex_of(&self, f: &FlagId) -> &VertexId {
        &self.boundary[f]
    }

    pub fn is_tail(&self, f: &FlagId) -> bool {
        self.involution.get(f) == Some(f)
    }

    pub fn tails(&self) -> BTreeSet<FlagId> {
        self.flags.iter().filter(|f| self.is_tail(f)).cloned().collect()
    }

    /// Two-element orbits of the involution.
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.flags
            .iter()
            .filter_map(|f| {
                let j = &self.involution[f];
                (f < j).then(|| (f.clone(), j.clone()))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.flags.iter().filter(|f| !self.is_tail(f)).count() / 2
    }

    pub fn flags_at(&self, v: &VertexId) -> Result<BTreeSet<FlagId>> {
        if !self.vertices.contains(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
        Ok(self.flags_at_unchecked(v))
    }

    pub(crate) fn flags_at_unchecked(&self, v: &VertexId) -> BTreeSet<FlagId> {
        self.boundary
            .iter()
            .filter(|(_, w)| *w == v)
            .map(|(f, _)| f.clone())
            .collect()
    }

    /// Flags grouped by vertex, every vertex present.
    pub fn star_map(&self) -> BTreeMap<VertexId, Vec<FlagId>> {
        let mut stars: BTreeMap<VertexId, Vec<FlagId>> =
            self.vertices.iter().map(|v| (v.clone(), Vec::new())).collect();
        for (f, v) in &self.boundary {
            stars.entry(v.clone()).or_default().push(f.clone());
        }
        stars
    }

    pub fn is_loop(&self, e: &Edge) -> bool {
        self.boundary[&e.0] == self.boundary[&e.1]
    }

    /// Connected components as vertex sets, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut uf = UnionFind::new(self.vertices.iter().cloned());
        for (a, b) in self.edges() {
            uf.union(&self.boundary[&a], &self.boundary[&b]);
        }
        uf.classes()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Tagged disjoint union: every identifier of `self` gets prefix `0/`, of `other` prefix `1/`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut out = self.retag(0);
        let right = other.retag(1);
        out.flags.extend(right.flags);
        out.vertices.extend(right.vertices);
        out.boundary.extend(right.boundary);
        out.involution.extend(right.involution);
        out
    }

    fn retag(&self, tag: usize) -> Graph {
        let f = |x: &FlagId| FlagId(tagged(tag, x.as_str()));
        let v = |x: &VertexId| VertexId(tagged(tag, x.as_str()));
        Graph {
            flags: self.flags.iter().map(f).collect(),
            vertices: self.vertices.iter().map(v).collect(),
            boundary: self.boundary.iter().map(|(a, b)| (f(a), v(b))).collect(),
            involution: self.involution.iter().map(|(a, b)| (f(a), f(b))).collect(),
        }
    }

    /// Union of graphs whose identifiers are already disjoint.
    pub fn union_disjoint(parts: impl IntoIterator<Item = Graph>) -> Result<Graph> {
        let mut out = Graph::empty();
        for p in parts {
            if let Some(f) = p.flags.iter().find(|f| out.flags.contains(*f)) {
                return Err(Error::Inconsistent(format!("flag {f} occurs in two parts")));
            }
            if let Some(v) = p.vertices.iter().find(|v| out.vertices.contains(*v)) {
                return Err(Error::Inconsistent(format!("vertex {v} occurs in two parts")));
            }
            out.flags.extend(p.flags);
            out.vertices.extend(p.vertices);
            out.boundary.extend(p.boundary);
            out.involution.extend(p.involution);
        }
        Ok(out)
    }

    /// Corolla of `v`: the vertex with all its flags turned into tails.
    pub fn star(&self, v: &VertexId) -> Graph {
        Graph::corolla(v.clone(), self.flags_at_unchecked(v))
    }
}

/// Union-find keyed by ordered identifiers.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind<K: Ord + Clone> {
    parent: BTreeMap<K, K>,
}

impl<K: Ord + Clone> UnionFind<K> {
    pub fn new(keys: impl IntoIterator<Item = K>) -> Self {
        Self {
            parent: keys.into_iter().map(|k| (k.clone(), k)).collect(),
        }
    }

    pub fn find(&mut self, k: &K) -> K {
        let mut root = k.clone();
        loop {
            let p = self.parent[&root].clone();
            if p == root {
                break;
            }
            root = p;
        }
        let mut cur = k.clone();
        while cur != root {
            let next = self.parent[&cur].clone();
            self.parent.insert(cur, root.clone());
            cur = next;
        }
        root
    }

    /// Returns false when already joined.
    pub fn union(&mut self, a: &K, b: &K) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller key becomes the root, keeping roots deterministic
        if ra < rb {
            self.parent.insert(rb, ra);
        } else {
            self.parent.insert(ra, rb);
        }
        true
    }

    pub fn classes(&mut self) -> Vec<BTreeSet<K>> {
        let keys: Vec<K> = self.parent.keys().cloned().collect();
        let mut by_root: BTreeMap<K, BTreeSet<K>> = BTreeMap::new();
        for k in keys {
            let r = self.find(&k);
            by_root.entry(r).or_default().insert(k);
        }
        by_root.into_values().collect()
    }
}
