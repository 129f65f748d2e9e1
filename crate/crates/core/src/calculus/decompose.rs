use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::susy::SusyMorphism;

use super::{classify, contract, graft, Elementary, ElementaryKind};

/// Decomposes `h` into a grafting, single-edge contractions in
/// lexicographic order, and a final isomorphism onto `h.target`.
pub fn decompose_to_elementaries(h: &SusyMorphism) -> Result<Vec<Elementary>> {
    let order: Vec<Edge> = h.contracted.iter().cloned().collect();
    decompose_with_order(h, &order)
}

/// As [`decompose_to_elementaries`], contracting in the given order, which
/// must list every contracted pair of `h` exactly once.
pub fn decompose_with_order(h: &SusyMorphism, order: &[Edge]) -> Result<Vec<Elementary>> {
    h.ensure_valid_susy()?;
    let normalized: BTreeSet<Edge> = order.iter().map(|(a, b)| super::edge_of(a, b)).collect();
    if normalized != h.contracted || normalized.len() != order.len() {
        return Err(Error::Inconsistent(
            "contraction order must list each contracted pair once".into(),
        ));
    }
    let src = &h.source.graph;
    let mut steps = Vec::new();

    let mut to_graft: Vec<Edge> = h.grafted_pairs().into_iter().collect();
    to_graft.extend(
        h.contracted
            .iter()
            .filter(|(a, b)| src.partner(a) != b)
            .cloned(),
    );
    to_graft.sort();
    let mut current = h.source.clone();
    if !to_graft.is_empty() {
        let m = graft(&current, &to_graft)?;
        current = m.target.clone();
        steps.push(Elementary {
            kind: ElementaryKind::Grafting { pairs: to_graft },
            morphism: m,
        });
    }

    for (a, b) in order {
        let pair = super::edge_of(a, b);
        let m = contract(&current, std::slice::from_ref(&pair))?;
        current = m.target.clone();
        let kind = classify(&m);
        steps.push(Elementary { kind, morphism: m });
    }

    // `current` has the flags of h's image under source names
    let vertex_map: BTreeMap<_, _> = current
        .graph
        .vertices
        .iter()
        .map(|w| (w.clone(), h.vertex_map[w].clone()))
        .collect();
    let iso = SusyMorphism::new(
        current.clone(),
        h.target.clone(),
        h.flag_map.clone(),
        vertex_map,
        [],
    );
    if iso != SusyMorphism::identity(&current) || steps.is_empty() {
        steps.push(Elementary {
            kind: ElementaryKind::Isomorphism {
                flag_bijection: iso.flag_map.clone(),
                vertex_bijection: iso.vertex_map.clone(),
            },
            morphism: iso,
        });
    }
    Ok(steps)
}

/// Composite of a non-empty chain of elementary morphisms.
pub fn compose_all(steps: &[Elementary]) -> Result<SusyMorphism> {
    let (first, rest) = steps
        .split_first()
        .ok_or_else(|| Error::Inconsistent("empty chain".into()))?;
    rest.iter()
        .try_fold(first.morphism.clone(), |acc, e| acc.then(&e.morphism))
}

#[cfg(test)]
mod tests {
    use super::super::tests::ns_graph;
    use super::super::{contract, graft};
    use super::*;
    use crate::graph::Graph;

    fn triangle_with_tails() -> crate::susy::SusyGraph {
        let mut g = Graph::empty();
        g.add_edge("a", "u", "b", "w");
        g.add_edge("c", "w", "d", "x");
        g.add_edge("e", "x", "f", "u");
        for (t, v) in [("1", "u"), ("2", "w"), ("3", "x")] {
            g.add_flag(t, v);
        }
        ns_graph(g, &[("u", 0), ("w", 0), ("x", 0)])
    }

    #[test]
    fn identity_gives_single_identity() {
        let g = triangle_with_tails();
        let h = SusyMorphism::identity(&g);
        let steps = decompose_to_elementaries(&h).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(compose_all(&steps).unwrap(), h);
    }

    #[test]
    fn two_edges_in_both_orders() {
        let g = triangle_with_tails();
        let h = contract(&g, &[("a".into(), "b".into()), ("c".into(), "d".into())]).unwrap();
        let steps = decompose_to_elementaries(&h).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|s| matches!(s.kind, ElementaryKind::EdgeContraction { .. })));
        assert_eq!(compose_all(&steps).unwrap(), h);

        let rev = [("c".into(), "d".into()), ("a".into(), "b".into())];
        assert_eq!(compose_all(&decompose_with_order(&h, &rev).unwrap()).unwrap(), h);
    }

    #[test]
    fn third_edge_of_triangle_becomes_a_loop() {
        let g = triangle_with_tails();
        let all = [("a".into(), "b".into()), ("c".into(), "d".into()), ("e".into(), "f".into())];
        let h = contract(&g, &all).unwrap();
        assert_eq!(h.target.genus_of(&"u".into()), 1);
        let steps = decompose_to_elementaries(&h).unwrap();
        assert!(matches!(steps[2].kind, ElementaryKind::LoopContraction { .. }));
        assert_eq!(compose_all(&steps).unwrap(), h);
    }

    #[test]
    fn virtual_contraction_is_graft_then_contract() {
        let g = ns_graph(
            {
                let mut g = Graph::corolla("u", ["1", "2", "3"]);
                for t in ["4", "5", "6"] {
                    g.add_flag(t, "w");
                }
                g.add_edge("a", "u", "b", "w");
                g
            },
            &[("u", 0), ("w", 0)],
        );
        let h = contract(&g, &[("3".into(), "6".into())]).unwrap();
        let steps = decompose_to_elementaries(&h).unwrap();
        assert!(matches!(steps[0].kind, ElementaryKind::Grafting { .. }));
        assert!(matches!(steps[1].kind, ElementaryKind::EdgeContraction { .. }));
        assert_eq!(compose_all(&steps).unwrap(), h);
    }

    #[test]
    fn grafting_followed_by_contraction() {
        let g = ns_graph(
            {
                let mut g = Graph::corolla("u", ["1", "2", "p"]);
                for t in ["q", "3", "4"] {
                    g.add_flag(t, "w");
                }
                g.add_edge("a", "u", "b", "w");
                g
            },
            &[("u", 0), ("w", 0)],
        );
        let gr = graft(&g, &[("p".into(), "q".into())]).unwrap();
        let c = contract(&gr.target, &[("a".into(), "b".into())]).unwrap();
        let h = gr.then(&c).unwrap();
        let steps = decompose_to_elementaries(&h).unwrap();
        assert_eq!(compose_all(&steps).unwrap(), h);
    }

    #[test]
    fn bad_order_rejected() {
        let g = triangle_with_tails();
        let h = contract(&g, &[("a".into(), "b".into())]).unwrap();
        assert!(decompose_with_order(&h, &[]).is_err());
    }
}
