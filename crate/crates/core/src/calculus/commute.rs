use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::susy::{SusyGraph, SusyMorphism};

use super::{classify, contract, edge_of, ElementaryKind};

/// `con_σ(f,f′) ∘ a` against `a_(f,f′) ∘ con_τ(a(f),a(f′))`.
#[derive(Debug, Clone, Serialize)]
pub struct IsoContractionSquare {
    #[serde(skip)]
    pub induced: SusyMorphism,
    #[serde(skip)]
    pub contraction_second: SusyMorphism,
    #[serde(skip)]
    pub contraction_first: SusyMorphism,
    pub commutes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionSquare {
    pub first_then_second: SusyGraph,
    pub second_then_first: SusyGraph,
    #[serde(skip)]
    pub composites: (SusyMorphism, SusyMorphism),
    pub commutes: bool,
}

fn edge_in(g: &SusyGraph, (a, b): &Edge) -> Result<Edge> {
    for f in [a, b] {
        if !g.graph.flags.contains(f) {
            return Err(Error::UnknownFlag(f.clone()));
        }
    }
    if a == b || g.graph.partner(a) != b {
        return Err(Error::NotAnEdge(a.clone(), b.clone()));
    }
    Ok(edge_of(a, b))
}

/// Moves a contraction of `σ` past an isomorphism `a: τ → σ`.
pub fn commute_iso_contraction(a: &SusyMorphism, e: &Edge) -> Result<IsoContractionSquare> {
    a.ensure_valid_susy()?;
    if !matches!(classify(a), ElementaryKind::Isomorphism { .. }) && *a != SusyMorphism::identity(&a.source) {
        return Err(Error::Inconsistent("not an isomorphism".into()));
    }
    let e = edge_in(&a.target, e)?;
    let con_sigma = contract(&a.target, std::slice::from_ref(&e))?;
    let pulled = edge_of(&a.flag_map[&e.0], &a.flag_map[&e.1]);
    let con_tau = contract(&a.source, &[pulled])?;

    let induced = SusyMorphism::new(
        con_tau.target.clone(),
        con_sigma.target.clone(),
        con_sigma
            .target
            .graph
            .flags
            .iter()
            .map(|f| (f.clone(), a.flag_map[f].clone()))
            .collect(),
        con_tau
            .target
            .graph
            .vertices
            .iter()
            .map(|w| (w.clone(), con_sigma.vertex_map[&a.vertex_map[w]].clone()))
            .collect(),
        [],
    );
    induced.ensure_valid_susy()?;
    let contraction_second = a.then(&con_sigma)?;
    let contraction_first = con_tau.then(&induced)?;
    Ok(IsoContractionSquare {
        commutes: contraction_second == contraction_first,
        induced,
        contraction_second,
        contraction_first,
    })
}

/// Contracts two distinct edges in both orders.
pub fn commute_contractions(tau: &SusyGraph, e1: &Edge, e2: &Edge) -> Result<ContractionSquare> {
    let (e1, e2) = (edge_in(tau, e1)?, edge_in(tau, e2)?);
    if [&e1.0, &e1.1].iter().any(|f| **f == e2.0 || **f == e2.1) {
        return Err(Error::OverlappingEdges(format!("{e1:?} and {e2:?}")));
    }
    let run = |x: &Edge, y: &Edge| -> Result<SusyMorphism> {
        let c1 = contract(tau, std::slice::from_ref(x))?;
        let c2 = contract(&c1.target, std::slice::from_ref(y))?;
        c1.then(&c2)
    };
    let h12 = run(&e1, &e2)?;
    let h21 = run(&e2, &e1)?;
    Ok(ContractionSquare {
        first_then_second: h12.target.clone(),
        second_then_first: h21.target.clone(),
        commutes: h12 == h21,
        composites: (h12, h21),
    })
}
