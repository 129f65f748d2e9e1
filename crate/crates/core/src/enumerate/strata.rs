use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::contract;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ids::{FlagId, Label, VertexId};
use crate::lift::{edge_colorings, TailPartition};
use crate::susy::{Color, SusyGraph};

use super::canon::{canonical_form, canonical_graph};

pub const DEFAULT_MAX_EDGES: usize = 8;

/// One boundary stratum: a stable SUSY graph up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub graph: SusyGraph,
    pub certificate: String,
    /// Index of the underlying modular shape in [`modular_shapes`] order.
    pub shape: usize,
    /// Number of raw colorings of the shape landing in this class.
    pub multiplicity: usize,
}

fn check_parameters(genus: u32, n: usize, max_edges: usize) -> Result<usize> {
    if 2 * genus as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable(format!("2g - 2 + n <= 0 for g = {genus}, n = {n}")));
    }
    let needed = 3 * genus as usize + n - 3;
    if needed > max_edges {
        return Err(Error::LimitExceeded { needed, limit: max_edges });
    }
    Ok(needed)
}

fn fresh(taken: &BTreeSet<String>, stem: &str) -> String {
    (0..)
        .map(|k| format!("{stem}{k}"))
        .find(|s| !taken.contains(s))
        .expect("unbounded supply")
}

/// Graphs with one more edge contracting onto `g`.
fn uncontractions(g: &SusyGraph) -> Vec<SusyGraph> {
    let flag_names: BTreeSet<String> = g.graph.flags.iter().map(|f| f.0.clone()).collect();
    let vertex_names: BTreeSet<String> = g.graph.vertices.iter().map(|v| v.0.clone()).collect();
    let x = FlagId(fresh(&flag_names, "n"));
    let y = FlagId(fresh(&flag_names.iter().cloned().chain([x.0.clone()]).collect(), "n"));
    let w = VertexId(fresh(&vertex_names, "s"));
    let mut out = Vec::new();
    for v in &g.graph.vertices {
        let gv = g.genus_of(v);
        let flags: Vec<FlagId> = g.graph.flags_at_unchecked(v).into_iter().collect();
        if gv >= 1 {
            let mut h = g.clone();
            h.graph.add_flag(x.clone(), v.clone());
            h.graph.add_flag(y.clone(), v.clone());
            h.graph.join(x.clone(), y.clone());
            h.labeling.genus.insert(v.clone(), gv - 1);
            h.labeling.color.insert(x.clone(), Color::Ns);
            h.labeling.color.insert(y.clone(), Color::Ns);
            out.push(h);
        }
        assert!(flags.len() < 32, "vertex degree too large to split");
        for g1 in 0..=gv {
            let g2 = gv - g1;
            for mask in 0u32..1 << flags.len() {
                let moved = mask.count_ones() as i64;
                let stays = flags.len() as i64 - moved;
                if 2 * g1 as i64 - 1 + stays <= 0 || 2 * g2 as i64 - 1 + moved <= 0 {
                    continue;
                }
                let mut h = g.clone();
                h.graph.add_vertex(w.clone());
                for (i, f) in flags.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        h.graph.boundary.insert(f.clone(), w.clone());
                    }
                }
                h.graph.add_edge(x.clone(), v.clone(), y.clone(), w.clone());
                h.labeling.genus.insert(v.clone(), g1);
                h.labeling.genus.insert(w.clone(), g2);
                h.labeling.color.insert(x.clone(), Color::Ns);
                h.labeling.color.insert(y.clone(), Color::Ns);
                out.push(h);
            }
        }
    }
    out
}

/// Stable modular graphs (all flags NS) of genus `genus` with the given
/// tail labels, as canonical representatives ordered by edge count.
pub fn modular_shapes(genus: u32, labels: &[Label], max_edges: usize) -> Result<Vec<SusyGraph>> {
    let distinct: BTreeSet<&Label> = labels.iter().collect();
    if distinct.len() != labels.len() {
        return Err(Error::Label("repeated tail label".into()));
    }
    let needed = check_parameters(genus, labels.len(), max_edges)?;
    let tails: Vec<String> = (0..labels.len()).map(|i| format!("t{i}")).collect();
    let g = Graph::corolla("v", tails.iter().cloned());
    let mut corolla = SusyGraph::self_labeled(
        g.clone(),
        [("v".into(), genus)].into(),
        g.flags.iter().map(|f| (f.clone(), Color::Ns)).collect(),
    );
    corolla.labeling.ns_labels = labels
        .iter()
        .zip(&tails)
        .map(|(l, t)| (l.clone(), FlagId(t.clone())))
        .collect();

    let mut all = vec![canonical_graph(&corolla)];
    let mut level = all.clone();
    for _ in 0..needed {
        let found: BTreeMap<String, SusyGraph> = level
            .par_iter()
            .flat_map_iter(uncontractions)
            .map(|h| (canonical_form(&h).certificate, canonical_graph(&h)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        level = found.into_values().collect();
        all.extend(level.iter().cloned());
    }
    Ok(all)
}

/// Stable SUSY graphs of genus `genus` with NS tails `ns` and Ramond tails
/// `r`, one per isomorphism class (labels fixed).
pub fn enumerate_strata(genus: u32, ns: &[Label], r: &[Label], max_edges: usize) -> Result<Vec<Stratum>> {
    if !r.len().is_multiple_of(2) {
        return Err(Error::OddRamond(r.len()));
    }
    let labels: Vec<Label> = ns.iter().chain(r).cloned().collect();
    let shapes = modular_shapes(genus, &labels, max_edges)?;
    let partition = TailPartition {
        ns: ns.iter().cloned().collect(),
        r: r.iter().cloned().collect(),
    };
    let colored: Vec<Vec<(String, SusyGraph)>> = shapes
        .par_iter()
        .map(|shape| -> Result<Vec<(String, SusyGraph)>> {
            Ok(edge_colorings(shape, &partition)?
                .into_iter()
                .map(|c| (canonical_form(&c).certificate, canonical_graph(&c)))
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut classes: BTreeMap<String, Stratum> = BTreeMap::new();
    for (shape, found) in colored.into_iter().enumerate() {
        for (certificate, graph) in found {
            classes
                .entry(certificate.clone())
                .or_insert_with(|| Stratum { graph, certificate, shape, multiplicity: 0 })
                .multiplicity += 1;
        }
    }
    let mut strata: Vec<Stratum> = classes.into_values().collect();
    strata.sort_by(|a, b| (a.shape, &a.certificate).cmp(&(b.shape, &b.certificate)));
    Ok(strata)
}

/// Strata ordered by contraction, the corolla on top: `covers[i]` lists
/// the strata covered by `i`, those with one more edge contracting onto it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionPoset {
    pub rank: Vec<usize>,
    pub covers: Vec<Vec<usize>>,
    pub top: Option<usize>,
}

pub fn contraction_poset(strata: &[Stratum]) -> Result<ContractionPoset> {
    let index: BTreeMap<&str, usize> = strata
        .iter()
        .enumerate()
        .map(|(i, s)| (s.certificate.as_str(), i))
        .collect();
    let mut covers = vec![BTreeSet::new(); strata.len()];
    for (i, s) in strata.iter().enumerate() {
        for e in s.graph.graph.edges() {
            let c = contract(&s.graph, &[e])?.target;
            let cert = canonical_form(&c).certificate;
            let j = *index
                .get(cert.as_str())
                .ok_or_else(|| Error::Inconsistent("contraction leaves the stratum list".into()))?;
            covers[j].insert(i);
        }
    }
    let rank: Vec<usize> = strata.iter().map(|s| s.graph.graph.edge_count()).collect();
    let tops: Vec<usize> = (0..strata.len()).filter(|&i| rank[i] == 0).collect();
    Ok(ContractionPoset {
        rank,
        covers: covers.into_iter().map(|c| c.into_iter().collect()).collect(),
        top: (tops.len() == 1).then(|| tops[0]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<Label> {
        xs.iter().map(|x| Label::from(*x)).collect()
    }

    #[test]
    fn genus_zero_four_ns() {
        let s = enumerate_strata(0, &labels(&["1", "2", "3", "4"]), &[], 8).unwrap();
        assert_eq!(s.len(), 4);
        let poset = contraction_poset(&s).unwrap();
        let top = poset.top.unwrap();
        assert_eq!(poset.covers[top].len(), 3);
    }

    #[test]
    fn genus_zero_mixed() {
        let s = enumerate_strata(0, &labels(&["1", "2"]), &labels(&["3", "4"]), 8).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn genus_one_one_tail() {
        let s = enumerate_strata(1, &labels(&["1"]), &[], 8).unwrap();
        assert_eq!(s.len(), 3);
        let poset = contraction_poset(&s).unwrap();
        assert_eq!(poset.covers[poset.top.unwrap()].len(), 2);
    }

    #[test]
    fn genus_zero_five() {
        let s = enumerate_strata(0, &labels(&["1", "2", "3", "4", "5"]), &[], 8).unwrap();
        assert_eq!(s.len(), 26);
    }

    #[test]
    fn limit_and_parameters() {
        assert!(matches!(
            enumerate_strata(2, &labels(&["1"]), &[], 2),
            Err(Error::LimitExceeded { needed: 4, limit: 2 })
        ));
        assert!(matches!(enumerate_strata(0, &labels(&["1", "2"]), &[], 8), Err(Error::Unstable(_))));
        assert!(matches!(enumerate_strata(0, &labels(&["1", "2"]), &labels(&["3"]), 8), Err(Error::OddRamond(1))));
    }

    #[test]
    fn singleton_poset() {
        let s = enumerate_strata(0, &labels(&["1", "2", "3"]), &[], 8).unwrap();
        assert_eq!(s.len(), 1);
        let p = contraction_poset(&s).unwrap();
        assert_eq!(p.top, Some(0));
        assert!(p.covers[0].is_empty());
    }
}
