use std::collections::{BTreeMap, BTreeSet};

use crate::calculus::{decompose_with_order, Elementary, ElementaryKind};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::ids::VertexId;
use crate::susy::{Color, SusyGraph, SusyMorphism};

use super::generators::{generator_relabel, glue_in};
use super::recipe::GluingRecipe;
use super::signature::{Factor, Mode, ModuliSignature};

fn mode_of(g: &SusyGraph) -> Mode {
    if g.modular {
        Mode::Classical
    } else {
        Mode::Super
    }
}

fn vertex_factor(g: &SusyGraph, v: &VertexId) -> Factor {
    let (ns, r) = g.colored_star(v);
    Factor {
        genus: g.genus_of(v),
        ns: ns.iter().map(|f| f.to_label()).collect(),
        r: r.iter().map(|f| f.to_label()).collect(),
    }
}

/// `Π_v M(g(v), F_NS(v), F_R(v))`, one factor per vertex in vertex order.
pub fn signature_of(g: &SusyGraph) -> ModuliSignature {
    ModuliSignature::new(
        g.graph.vertices.iter().map(|v| vertex_factor(g, v)).collect(),
        mode_of(g),
    )
}

fn ensure_stable(g: &SusyGraph, which: &str) -> Result<()> {
    let s = g.stability();
    if s.is_stable() {
        return Ok(());
    }
    let bad: Vec<String> = s.unstable().iter().map(|v| v.to_string()).collect();
    Err(Error::Unstable(format!("{which} vertices {}", bad.join(", "))))
}

/// The recipe of a morphism of stable graphs, read off directly.
pub fn evaluate_operad(h: &SusyMorphism) -> Result<GluingRecipe> {
    h.ensure_valid_susy()?;
    ensure_stable(&h.source, "source")?;
    ensure_stable(&h.target, "target")?;
    let (src, tgt) = (&h.source, &h.target);
    let index: BTreeMap<&VertexId, usize> = tgt.graph.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let nt = index.len();
    let mut ns_gluings = vec![BTreeSet::new(); nt];
    let mut r_gluings = vec![BTreeSet::new(); nt];
    for (a, b) in &h.contracted {
        let t = index[&h.vertex_map[src.graph.vertex_of(a)]];
        let pair = (a.to_label(), b.to_label());
        match src.color_of(a) {
            Color::Ns => ns_gluings[t].insert(pair),
            Color::R => r_gluings[t].insert(pair),
        };
    }
    let rank = if src.modular { 0 } else { r_gluings.iter().map(BTreeSet::len).sum() };
    Ok(GluingRecipe {
        source: signature_of(src),
        target: signature_of(tgt),
        assignment: src.graph.vertices.iter().map(|w| index[&h.vertex_map[w]]).collect(),
        ns_gluings,
        r_gluings,
        relabeling: h.flag_map.iter().map(|(t, s)| (s.to_label(), t.to_label())).collect(),
        ramond_fiber_rank: rank,
    }
    .canonical())
}

/// Graftings give identities, isomorphisms relabelings, contractions gluings.
pub fn evaluate_elementary(step: &Elementary) -> Result<GluingRecipe> {
    let m = &step.morphism;
    let sig = signature_of(&m.source).sorted();
    match &step.kind {
        ElementaryKind::Grafting { .. } => Ok(GluingRecipe::identity(&sig)),
        ElementaryKind::Isomorphism { flag_bijection, .. } => {
            let mut s = [BTreeMap::new(), BTreeMap::new()];
            for (t, f) in flag_bijection {
                let i = usize::from(m.source.color_of(f) == Color::R);
                s[i].insert(f.to_label(), t.to_label());
            }
            generator_relabel(&sig, &s[0], &s[1])
        }
        ElementaryKind::EdgeContraction { pair }
        | ElementaryKind::LoopContraction { pair }
        | ElementaryKind::VirtualContraction { pair } => {
            glue_in(&sig, m.source.color_of(&pair.0), &pair.0.to_label(), &pair.1.to_label())
        }
        ElementaryKind::Composite => Err(Error::Inconsistent("composite is not elementary".into())),
    }
}

/// Evaluates `h` through a decomposition with the given contraction order.
pub fn evaluate_via_elementaries(h: &SusyMorphism, order: &[Edge]) -> Result<GluingRecipe> {
    ensure_stable(&h.source, "source")?;
    ensure_stable(&h.target, "target")?;
    let steps = decompose_with_order(h, order)?;
    let mut acc = evaluate_elementary(&steps[0])?;
    for s in &steps[1..] {
        acc = acc.then(&evaluate_elementary(s)?)?;
    }
    Ok(acc)
}

/// Colors erased: Ramond gluings become ordinary gluings, fiber rank dropped.
pub fn project(r: &GluingRecipe) -> Result<GluingRecipe> {
    if r.source.mode != Mode::Super {
        return Err(Error::Inconsistent("project expects a super recipe".into()));
    }
    let flat = |s: &ModuliSignature| {
        ModuliSignature::new(s.factors.iter().map(Factor::classical).collect(), Mode::Classical)
    };
    let nt = r.target.factors.len();
    Ok(GluingRecipe {
        source: flat(&r.source),
        target: flat(&r.target),
        assignment: r.assignment.clone(),
        ns_gluings: (0..nt)
            .map(|t| r.ns_gluings[t].union(&r.r_gluings[t]).cloned().collect())
            .collect(),
        r_gluings: vec![BTreeSet::new(); nt],
        relabeling: r.relabeling.clone(),
        ramond_fiber_rank: 0,
    }
    .canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{contract, total_grafting};
    use crate::graph::Graph;
    use crate::operad::generators::generator_glue_ns;

    fn colored(g: Graph, genus: &[(&str, u32)], r: &[&str]) -> SusyGraph {
        let color = g
            .flags
            .iter()
            .map(|f| (f.clone(), if r.contains(&f.as_str()) { Color::R } else { Color::Ns }))
            .collect();
        SusyGraph::self_labeled(g, genus.iter().map(|(v, x)| (VertexId::from(*v), *x)).collect(), color)
    }

    fn two_corollas() -> SusyGraph {
        let mut g = Graph::corolla("u", ["1", "2", "f"]);
        for t in ["f'", "3", "4", "5"] {
            g.add_flag(t, "w");
        }
        g.join("f", "f'");
        colored(g, &[("u", 0), ("w", 0)], &["4", "5"])
    }

    #[test]
    fn total_grafting_is_identity_recipe() {
        let g = two_corollas();
        let r = evaluate_operad(&total_grafting(&g).unwrap()).unwrap();
        assert_eq!(r, GluingRecipe::identity(&r.source));
    }

    #[test]
    fn single_edge_matches_generator() {
        let g = two_corollas();
        let h = contract(&g, &[("f".into(), "f'".into())]).unwrap();
        let r = evaluate_operad(&h).unwrap();
        let sig = signature_of(&g);
        let expected = generator_glue_ns(&sig.factors[0], &sig.factors[1], &"f".into(), &"f'".into()).unwrap();
        assert_eq!(r, expected);
        r.ensure_valid().unwrap();
    }

    #[test]
    fn full_contraction_has_ramond_rank() {
        let mut g = Graph::corolla("u", ["1", "a", "b", "c", "d"]);
        for t in ["a'", "b'", "c'", "2"] {
            g.add_flag(t, "w");
        }
        g.join("a", "a'");
        g.join("b", "b'");
        g.join("c", "d");
        let s = colored(g, &[("u", 0), ("w", 1)], &["a", "a'", "b", "b'"]);
        s.ensure_valid().unwrap();
        let pairs: Vec<Edge> = s.graph.edges().into_iter().collect();
        let h = contract(&s, &pairs).unwrap();
        let r = evaluate_operad(&h).unwrap();
        assert_eq!(r.target.factors.len(), 1);
        assert_eq!(r.target.factors[0].genus as u64, s.genus());
        assert_eq!(r.ramond_fiber_rank, 2);
        r.ensure_valid().unwrap();
        let via = evaluate_via_elementaries(&h, &pairs.iter().rev().cloned().collect::<Vec<_>>()).unwrap();
        assert_eq!(via, r);
    }

    #[test]
    fn projection_commutes_with_forget() {
        let g = two_corollas();
        let h = contract(&g, &[("f".into(), "f'".into())]).unwrap();
        let lhs = project(&evaluate_operad(&h).unwrap()).unwrap();
        let rhs = evaluate_operad(&h.forget()).unwrap();
        assert_eq!(lhs, rhs);
        let id = GluingRecipe::identity(&signature_of(&g).sorted());
        assert_eq!(project(&id).unwrap(), GluingRecipe::identity(&signature_of(&g.forget()).sorted()));
    }

    #[test]
    fn unstable_rejected() {
        let g = colored(Graph::corolla("v", ["1", "2"]), &[("v", 0)], &[]);
        let h = SusyMorphism::identity(&g);
        assert!(matches!(evaluate_operad(&h), Err(Error::Unstable(_))));
    }
}
