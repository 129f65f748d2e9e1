//! Elementary morphisms (graftings, isomorphisms, single contractions),
//! total grafting, atomization and decomposition of SUSY graph morphisms.
//!
//! Contracted vertices are named after the smallest vertex identifier they
//! absorb, so contracting a set of edges one at a time or all at once lands
//! on the same graph.

mod atomize;
mod commute;
mod decompose;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use atomize::{atomize, Atomization};
pub use commute::{commute_contractions, commute_iso_contraction, ContractionSquare, IsoContractionSquare};
pub use decompose::{compose_all, decompose_to_elementaries, decompose_with_order};

use crate::error::{Error, Result};
use crate::graph::{ordered, Edge, Graph, UnionFind};
use crate::ids::{FlagId, VertexId};
use crate::morphism::HasGraph;
use crate::susy::{SusyGraph, SusyMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementaryKind {
    Grafting {
        pairs: Vec<Edge>,
    },
    Isomorphism {
        flag_bijection: BTreeMap<FlagId, FlagId>,
        vertex_bijection: BTreeMap<VertexId, VertexId>,
    },
    EdgeContraction {
        pair: Edge,
    },
    LoopContraction {
        pair: Edge,
    },
    VirtualContraction {
        pair: Edge,
    },
    Composite,
}

/// A morphism together with its elementary kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elementary {
    #[serde(flatten)]
    pub kind: ElementaryKind,
    #[serde(skip)]
    pub morphism: SusyMorphism,
}

fn check_pairs(g: &SusyGraph, pairs: &[Edge]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for (a, b) in pairs {
        for f in [a, b] {
            if !g.graph.flags.contains(f) {
                return Err(Error::UnknownFlag(f.clone()));
            }
            if !seen.insert(f) {
                return Err(Error::OverlappingEdges(format!("flag {f} used twice")));
            }
        }
        if a == b {
            return Err(Error::NotAnEdge(a.clone(), b.clone()));
        }
        if g.color_of(a) != g.color_of(b) {
            return Err(Error::Color(format!("({a},{b}) joins {} to {}", g.color_of(a), g.color_of(b))));
        }
    }
    Ok(())
}

/// Joins tail pairs into edges. Labels of the joined tails disappear.
pub fn graft(g: &SusyGraph, pairs: &[Edge]) -> Result<SusyMorphism> {
    check_pairs(g, pairs)?;
    let mut target = g.clone();
    for (a, b) in pairs {
        if !g.graph.is_tail(a) || !g.graph.is_tail(b) {
            return Err(Error::Inconsistent(format!("grafting needs two tails, got ({a},{b})")));
        }
        target.graph.join(a.clone(), b.clone());
        for f in [a, b] {
            if let Some((c, l)) = g.labeling.label_of(f) {
                target.labeling.labels_mut(c).remove(&l.clone());
            }
        }
    }
    Ok(SusyMorphism::new(
        g.clone(),
        target,
        identity_on(&g.graph.flags),
        identity_on(&g.graph.vertices),
        [],
    ))
}

/// Contracts the given pairs, each an edge or two tails (virtual contraction).
pub fn contract(g: &SusyGraph, pairs: &[Edge]) -> Result<SusyMorphism> {
    check_pairs(g, pairs)?;
    let src = &g.graph;
    for (a, b) in pairs {
        let edge = src.partner(a) == b;
        if !edge && !(src.is_tail(a) && src.is_tail(b)) {
            return Err(Error::NotAnEdge(a.clone(), b.clone()));
        }
    }
    let mut uf = UnionFind::new(src.vertices.iter().cloned());
    for (a, b) in pairs {
        uf.union(src.vertex_of(a), src.vertex_of(b));
    }
    let vertex_map: BTreeMap<VertexId, VertexId> =
        src.vertices.iter().map(|v| (v.clone(), uf.find(v))).collect();
    let gone: BTreeSet<&FlagId> = pairs.iter().flat_map(|(a, b)| [a, b]).collect();

    let mut graph = Graph::empty();
    for v in vertex_map.values() {
        graph.add_vertex(v.clone());
    }
    for f in src.flags.iter().filter(|f| !gone.contains(f)) {
        graph.flags.insert(f.clone());
        graph.boundary.insert(f.clone(), vertex_map[src.vertex_of(f)].clone());
        graph.involution.insert(f.clone(), src.partner(f).clone());
    }

    // g(v) = Σ g(w) + #pairs - (#w - 1)
    let mut genus: BTreeMap<VertexId, i64> = graph.vertices.iter().map(|v| (v.clone(), 1)).collect();
    for (w, v) in &vertex_map {
        *genus.get_mut(v).unwrap() += g.genus_of(w) as i64 - 1;
    }
    for (a, _) in pairs {
        *genus.get_mut(&vertex_map[src.vertex_of(a)]).unwrap() += 1;
    }

    let mut target = g.clone();
    target.graph = graph;
    target.labeling.genus = genus.into_iter().map(|(v, x)| (v, x as u32)).collect();
    target.labeling.color.retain(|f, _| !gone.contains(f));
    target.labeling.ns_labels.retain(|_, f| !gone.contains(f));
    target.labeling.r_labels.retain(|_, f| !gone.contains(f));

    Ok(SusyMorphism::new(
        g.clone(),
        target.clone(),
        identity_on(&target.graph.flags),
        vertex_map,
        pairs.iter().cloned(),
    ))
}

/// Renames flags and vertices; missing entries keep their name.
pub fn isomorphism(
    g: &SusyGraph,
    flag_rename: &BTreeMap<FlagId, FlagId>,
    vertex_rename: &BTreeMap<VertexId, VertexId>,
) -> Result<SusyMorphism> {
    let rf = |f: &FlagId| flag_rename.get(f).cloned().unwrap_or_else(|| f.clone());
    let rv = |v: &VertexId| vertex_rename.get(v).cloned().unwrap_or_else(|| v.clone());
    let src = &g.graph;
    let graph = Graph {
        flags: src.flags.iter().map(rf).collect(),
        vertices: src.vertices.iter().map(rv).collect(),
        boundary: src.boundary.iter().map(|(f, v)| (rf(f), rv(v))).collect(),
        involution: src.involution.iter().map(|(a, b)| (rf(a), rf(b))).collect(),
    };
    if graph.flags.len() != src.flags.len() || graph.vertices.len() != src.vertices.len() {
        return Err(Error::Inconsistent("renaming is not injective".into()));
    }
    let mut target = g.clone();
    target.graph = graph;
    target.labeling.genus = g.labeling.genus.iter().map(|(v, x)| (rv(v), *x)).collect();
    target.labeling.color = g.labeling.color.iter().map(|(f, c)| (rf(f), *c)).collect();
    for map in [&mut target.labeling.ns_labels, &mut target.labeling.r_labels] {
        for f in map.values_mut() {
            *f = rf(f);
        }
    }
    Ok(SusyMorphism::new(
        g.clone(),
        target,
        src.flags.iter().map(|f| (rf(f), f.clone())).collect(),
        src.vertices.iter().map(|v| (v.clone(), rv(v))).collect(),
        [],
    ))
}

/// `⊔_v σ_v → σ`: bijective on vertices and flags, grafting every edge.
pub fn total_grafting(g: &SusyGraph) -> Result<SusyMorphism> {
    let source = SusyGraph::union_disjoint(g.graph.vertices.iter().map(|v| g.star(v)))?;
    Ok(SusyMorphism::new(
        source,
        g.clone(),
        identity_on(&g.graph.flags),
        identity_on(&g.graph.vertices),
        [],
    ))
}

/// Disjoint union of morphisms whose identifiers are already disjoint.
pub fn union_morphisms(parts: &[SusyMorphism]) -> Result<SusyMorphism> {
    let source = SusyGraph::union_disjoint(parts.iter().map(|p| p.source.clone()))?;
    let target = SusyGraph::union_disjoint(parts.iter().map(|p| p.target.clone()))?;
    let mut flag_map = BTreeMap::new();
    let mut vertex_map = BTreeMap::new();
    let mut contracted = Vec::new();
    for p in parts {
        flag_map.extend(p.flag_map.clone());
        vertex_map.extend(p.vertex_map.clone());
        contracted.extend(p.contracted.iter().cloned());
    }
    Ok(SusyMorphism::new(source, target, flag_map, vertex_map, contracted))
}

fn identity_on<T: Clone + Ord>(xs: &BTreeSet<T>) -> BTreeMap<T, T> {
    xs.iter().map(|x| (x.clone(), x.clone())).collect()
}

fn is_identity<T: Eq>(m: &BTreeMap<T, T>) -> bool {
    m.iter().all(|(a, b)| a == b)
}

fn is_injective<K, V: Ord>(m: &BTreeMap<K, V>) -> bool {
    m.values().collect::<BTreeSet<_>>().len() == m.len()
}

/// Which elementary morphism `h` is, if any.
pub fn classify(h: &SusyMorphism) -> ElementaryKind {
    let src = h.source.graph();
    let grafted = h.grafted_pairs();
    let names_kept = is_identity(&h.flag_map);
    if h.contracted.is_empty() {
        let bijective = is_injective(&h.vertex_map) && h.flag_map.len() == src.flags.len();
        if !bijective {
            return ElementaryKind::Composite;
        }
        if grafted.is_empty() {
            return ElementaryKind::Isomorphism {
                flag_bijection: h.flag_map.clone(),
                vertex_bijection: h.vertex_map.clone(),
            };
        }
        if names_kept && is_identity(&h.vertex_map) {
            return ElementaryKind::Grafting {
                pairs: grafted.into_iter().collect(),
            };
        }
        return ElementaryKind::Composite;
    }
    if h.contracted.len() == 1 && grafted.is_empty() && names_kept {
        let pair = h.contracted.first().unwrap().clone();
        let (a, b) = &pair;
        if src.partner(a) != b {
            return ElementaryKind::VirtualContraction { pair };
        }
        if src.vertex_of(a) == src.vertex_of(b) {
            return ElementaryKind::LoopContraction { pair };
        }
        return ElementaryKind::EdgeContraction { pair };
    }
    ElementaryKind::Composite
}

pub(crate) fn edge_of(a: &FlagId, b: &FlagId) -> Edge {
    ordered(a.clone(), b.clone())
}
