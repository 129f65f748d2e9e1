use std::collections::BTreeMap;

use crate::error::Result;
use crate::graph::Graph;
use crate::ids::VertexId;
use crate::morphism::HasGraph;
use crate::susy::{SusyGraph, SusyMorphism};

use super::{total_grafting, union_morphisms};

/// Factorization of `h: τ → σ` through one piece per target vertex:
///
/// ```text
///   ⊔ τ_v ──⊔ h_v──▶ ⊔ σ_v
///     │ n               │ ∘_σ
///     ▼                 ▼
///     τ ───────h──────▶ σ
/// ```
#[derive(Debug, Clone)]
pub struct Atomization {
    pub pieces: BTreeMap<VertexId, SusyGraph>,
    pub piece_morphisms: BTreeMap<VertexId, SusyMorphism>,
    pub grafting_n: SusyMorphism,
    pub total_grafting: SusyMorphism,
}

impl Atomization {
    /// `∘_σ ∘ (⊔ h_v)` and `h ∘ n`, which must agree.
    pub fn square(&self, h: &SusyMorphism) -> Result<(SusyMorphism, SusyMorphism)> {
        let parts: Vec<SusyMorphism> = self.piece_morphisms.values().cloned().collect();
        let top = union_morphisms(&parts)?;
        Ok((top.then(&self.total_grafting)?, self.grafting_n.then(h)?))
    }

    pub fn commutes(&self, h: &SusyMorphism) -> Result<bool> {
        let (a, b) = self.square(h)?;
        Ok(a == b)
    }
}

/// Atomization of a valid morphism.
///
/// `τ_v` consists of the source vertices over `v` and all flags bounding
/// them. Only the contracted edges stay edges inside `τ_v`; every other
/// edge of `τ` is cut into two tails and re-grafted by `n`.
pub fn atomize(h: &SusyMorphism) -> Result<Atomization> {
    h.ensure_valid_susy()?;
    let (src, tgt) = (h.source.graph(), h.target.graph());
    let contracted = h.contracted_involution();

    let mut pieces = BTreeMap::new();
    let mut piece_morphisms = BTreeMap::new();
    for v in &tgt.vertices {
        let mut graph = Graph::empty();
        for (w, image) in &h.vertex_map {
            if image == v {
                graph.add_vertex(w.clone());
            }
        }
        for f in &src.flags {
            if graph.vertices.contains(src.vertex_of(f)) {
                graph.add_flag(f.clone(), src.vertex_of(f).clone());
            }
        }
        for (a, b) in &h.contracted {
            if src.partner(a) == b && graph.flags.contains(a) {
                graph.join(a.clone(), b.clone());
            }
        }
        let piece = h.source.restricted_to(graph);
        let star = h.target.star(v);
        let hv = SusyMorphism::new(
            piece.clone(),
            star.clone(),
            star.graph.flags.iter().map(|f| (f.clone(), h.flag_map[f].clone())).collect(),
            piece.graph.vertices.iter().map(|w| (w.clone(), v.clone())).collect(),
            h.contracted
                .iter()
                .filter(|(a, _)| piece.graph.flags.contains(a) && contracted.contains_key(a))
                .cloned(),
        );
        pieces.insert(v.clone(), piece);
        piece_morphisms.insert(v.clone(), hv);
    }

    let disjoint = SusyGraph::union_disjoint(pieces.values().cloned())?;
    let grafting_n = SusyMorphism::new(
        disjoint,
        h.source.clone(),
        src.flags.iter().map(|f| (f.clone(), f.clone())).collect(),
        src.vertices.iter().map(|w| (w.clone(), w.clone())).collect(),
        [],
    );
    Ok(Atomization {
        pieces,
        piece_morphisms,
        grafting_n,
        total_grafting: total_grafting(&h.target)?,
    })
}
