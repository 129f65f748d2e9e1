use std::collections::BTreeMap;

use serde::Serialize;

use crate::calculus::isomorphism;
use crate::ids::{FlagId, Label, VertexId};
use crate::susy::{Color, SusyGraph, SusyMorphism};

/// Vertex-level data of a graph, vertices numbered `0..n`.
struct Prepared<'a> {
    g: &'a SusyGraph,
    verts: Vec<VertexId>,
    genus: Vec<u32>,
    /// (vertex, color, label if fixed, flag)
    tails: Vec<(usize, Color, Option<Label>, FlagId)>,
    /// (vertex, vertex, color, flag at first, flag at second)
    edges: Vec<(usize, usize, Color, FlagId, FlagId)>,
}

type Cert = (Vec<u32>, Vec<(usize, Color, Option<Label>)>, Vec<(usize, usize, Color)>);

struct Search {
    best: Option<(Cert, Vec<usize>)>,
    min_leaves: Vec<Vec<usize>>,
}

impl<'a> Prepared<'a> {
    fn new(g: &'a SusyGraph, labels_fixed: bool) -> Self {
        let verts: Vec<VertexId> = g.graph.vertices.iter().cloned().collect();
        let idx: BTreeMap<&VertexId, usize> = verts.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let genus = verts.iter().map(|v| g.genus_of(v)).collect();
        let tails = g
            .graph
            .tails()
            .into_iter()
            .map(|t| {
                let label = if labels_fixed { g.labeling.label_of(&t).map(|(_, l)| l.clone()) } else { None };
                (idx[g.graph.vertex_of(&t)], g.color_of(&t), label, t)
            })
            .collect();
        let edges = g
            .graph
            .edges()
            .into_iter()
            .map(|(a, b)| (idx[g.graph.vertex_of(&a)], idx[g.graph.vertex_of(&b)], g.color_of(&a), a, b))
            .collect();
        Self { g, verts, genus, tails, edges }
    }

    fn initial_partition(&self) -> Vec<Vec<usize>> {
        let n = self.verts.len();
        let mut inv: Vec<(u32, Vec<(Color, Option<Label>)>, Vec<Color>, usize)> =
            (0..n).map(|v| (self.genus[v], Vec::new(), Vec::new(), 0)).collect();
        for (v, c, l, _) in &self.tails {
            inv[*v].1.push((*c, l.clone()));
        }
        for (u, w, c, _, _) in &self.edges {
            inv[*u].3 += 1;
            inv[*w].3 += 1;
            if u == w {
                inv[*u].2.push(*c);
            }
        }
        for x in &mut inv {
            x.1.sort();
            x.2.sort();
        }
        split_by(vec![(0..n).collect()], |v| inv[v].clone())
    }

    fn refine(&self, mut part: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let n = self.verts.len();
        loop {
            let mut cell_of = vec![0; n];
            for (i, cell) in part.iter().enumerate() {
                for &v in cell {
                    cell_of[v] = i;
                }
            }
            let mut nbrs: Vec<Vec<(usize, Color)>> = vec![Vec::new(); n];
            for (u, w, c, _, _) in &self.edges {
                nbrs[*u].push((cell_of[*w], *c));
                nbrs[*w].push((cell_of[*u], *c));
            }
            for x in &mut nbrs {
                x.sort();
            }
            let next = split_by(part.clone(), |v| nbrs[v].clone());
            if next.len() == part.len() {
                return next;
            }
            part = next;
        }
    }

    fn cert(&self, order: &[usize]) -> Cert {
        let mut pos = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let genus = order.iter().map(|&v| self.genus[v]).collect();
        let mut tails: Vec<_> = self.tails.iter().map(|(v, c, l, _)| (pos[*v], *c, l.clone())).collect();
        tails.sort();
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|(u, w, c, _, _)| (pos[*u].min(pos[*w]), pos[*u].max(pos[*w]), *c))
            .collect();
        edges.sort();
        (genus, tails, edges)
    }

    fn search(&self, part: Vec<Vec<usize>>, st: &mut Search) {
        let part = self.refine(part);
        let Some(i) = part.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = part.into_iter().flatten().collect();
            let cert = self.cert(&order);
            match &st.best {
                Some((b, _)) if *b < cert => {}
                Some((b, _)) if *b == cert => st.min_leaves.push(order),
                _ => {
                    st.best = Some((cert, order.clone()));
                    st.min_leaves = vec![order];
                }
            }
            return;
        };
        for &v in &part[i] {
            let mut next = part[..i].to_vec();
            next.push(vec![v]);
            next.push(part[i].iter().copied().filter(|&w| w != v).collect());
            next.extend(part[i + 1..].iter().cloned());
            self.search(next, st);
        }
    }

    fn run(&self) -> Search {
        let mut st = Search { best: None, min_leaves: Vec::new() };
        if self.verts.is_empty() {
            st.best = Some((self.cert(&[]), Vec::new()));
            st.min_leaves.push(Vec::new());
            return st;
        }
        self.search(self.initial_partition(), &mut st);
        st
    }

    /// Flag renaming to canonical identifiers for a vertex order.
    fn rename(&self, order: &[usize]) -> (BTreeMap<FlagId, FlagId>, BTreeMap<VertexId, VertexId>) {
        let mut pos = vec![0; order.len()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let vertex_map = (0..order.len())
            .map(|v| (self.verts[v].clone(), VertexId(format!("v{}", pos[v]))))
            .collect();
        let mut flag_map = BTreeMap::new();
        let mut tails: Vec<_> = self.tails.iter().map(|(v, c, l, f)| (pos[*v], *c, l.clone(), f)).collect();
        tails.sort();
        for (k, (_, _, _, f)) in tails.into_iter().enumerate() {
            flag_map.insert(f.clone(), FlagId(format!("t{k}")));
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|(u, w, c, a, b)| {
                let (lo, hi) = if pos[*u] <= pos[*w] { (a, b) } else { (b, a) };
                (pos[*u].min(pos[*w]), pos[*u].max(pos[*w]), *c, lo, hi)
            })
            .collect();
        edges.sort();
        for (k, (_, _, _, lo, hi)) in edges.into_iter().enumerate() {
            flag_map.insert(lo.clone(), FlagId(format!("e{k}a")));
            flag_map.insert(hi.clone(), FlagId(format!("e{k}b")));
        }
        (flag_map, vertex_map)
    }

    /// Orders of the symmetries acting within fixed vertices.
    fn local_factor(&self) -> u64 {
        let mut groups: BTreeMap<(usize, usize, Color, bool), u64> = BTreeMap::new();
        for (u, w, c, _, _) in &self.edges {
            *groups.entry(((*u).min(*w), (*u).max(*w), *c, false)).or_default() += 1;
        }
        for (v, c, l, _) in &self.tails {
            if l.is_none() {
                *groups.entry((*v, usize::MAX, *c, true)).or_default() += 1;
            }
        }
        groups
            .iter()
            .map(|(&(u, w, _, _), &k)| {
                let loops = if u == w { 1u64 << k } else { 1 };
                (1..=k).product::<u64>() * loops
            })
            .product()
    }

    /// Lift of a vertex automorphism to flags.
    fn lift(&self, from: &[usize], to: &[usize]) -> Automorphism {
        let mut pi = vec![0; from.len()];
        for (a, b) in from.iter().zip(to) {
            pi[*a] = *b;
        }
        let mut flags = BTreeMap::new();
        let mut tails_at: BTreeMap<(usize, Color, Option<Label>), Vec<&FlagId>> = BTreeMap::new();
        for (v, c, l, f) in &self.tails {
            tails_at.entry((*v, *c, l.clone())).or_default().push(f);
        }
        for ((v, c, l), fs) in &tails_at {
            for (f, g) in fs.iter().zip(&tails_at[&(pi[*v], *c, l.clone())]) {
                flags.insert((*f).clone(), (*g).clone());
            }
        }
        // edges grouped by unordered endpoint pair and color, flags listed at the smaller vertex first
        let mut edges_at: BTreeMap<(usize, usize, Color), Vec<(&FlagId, &FlagId)>> = BTreeMap::new();
        for (u, w, c, a, b) in &self.edges {
            let entry = if u <= w { ((*u, *w, *c), (a, b)) } else { ((*w, *u, *c), (b, a)) };
            edges_at.entry(entry.0).or_default().push(entry.1);
        }
        for ((u, w, c), es) in &edges_at {
            let (pu, pw) = (pi[*u], pi[*w]);
            let image = &edges_at[&(pu.min(pw), pu.max(pw), *c)];
            for ((a, b), (x, y)) in es.iter().zip(image) {
                let (x, y) = if pu <= pw { (x, y) } else { (y, x) };
                flags.insert((*a).clone(), (*x).clone());
                flags.insert((*b).clone(), (*y).clone());
            }
        }
        let vertices = (0..pi.len()).map(|v| (self.verts[v].clone(), self.verts[pi[v]].clone())).collect();
        Automorphism { flags, vertices }
    }

    fn local_generators(&self) -> Vec<Automorphism> {
        let identity = || Automorphism {
            flags: self.g.graph.flags.iter().map(|f| (f.clone(), f.clone())).collect(),
            vertices: self.verts.iter().map(|v| (v.clone(), v.clone())).collect(),
        };
        let swap = |pairs: &[(&FlagId, &FlagId)]| {
            let mut a = identity();
            for (x, y) in pairs {
                a.flags.insert((*x).clone(), (*y).clone());
                a.flags.insert((*y).clone(), (*x).clone());
            }
            a
        };
        let mut out = Vec::new();
        let mut edges_at: BTreeMap<(usize, usize, Color), Vec<(&FlagId, &FlagId)>> = BTreeMap::new();
        for (u, w, c, a, b) in &self.edges {
            let entry = if u <= w { ((*u, *w, *c), (a, b)) } else { ((*w, *u, *c), (b, a)) };
            edges_at.entry(entry.0).or_default().push(entry.1);
        }
        for ((u, w, _), es) in &edges_at {
            if u == w {
                for (a, b) in es {
                    out.push(swap(&[(a, b)]));
                }
            }
            for pair in es.windows(2) {
                let ((a, b), (x, y)) = (pair[0], pair[1]);
                out.push(swap(&[(a, x), (b, y)]));
            }
        }
        let mut tails_at: BTreeMap<(usize, Color), Vec<&FlagId>> = BTreeMap::new();
        for (v, c, l, f) in &self.tails {
            if l.is_none() {
                tails_at.entry((*v, *c)).or_default().push(f);
            }
        }
        for fs in tails_at.values() {
            for pair in fs.windows(2) {
                out.push(swap(&[(pair[0], pair[1])]));
            }
        }
        out
    }
}

fn split_by<K: Ord>(part: Vec<Vec<usize>>, key: impl Fn(usize) -> K) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for cell in part {
        let mut keyed: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for v in cell {
            keyed.entry(key(v)).or_default().push(v);
        }
        out.extend(keyed.into_values());
    }
    out
}

/// Isomorphism-class certificate and a map onto the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub certificate: String,
    /// Original flag to canonical flag.
    pub flag_map: BTreeMap<FlagId, FlagId>,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

/// A flag and vertex permutation preserving all structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Automorphism {
    pub flags: BTreeMap<FlagId, FlagId>,
    pub vertices: BTreeMap<VertexId, VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismGroup {
    pub order: u64,
    pub generators: Vec<Automorphism>,
}

fn encode(g: &SusyGraph, cert: &Cert) -> String {
    serde_json::to_string(&(g.modular, cert)).expect("certificate serializes")
}

/// Canonical form with tail labels fixed pointwise.
pub fn canonical_form(g: &SusyGraph) -> CanonicalForm {
    canonical_form_with(g, true)
}

/// Canonical form; with `labels_fixed = false`, tails of one color are
/// interchangeable.
pub fn canonical_form_with(g: &SusyGraph, labels_fixed: bool) -> CanonicalForm {
    let p = Prepared::new(g, labels_fixed);
    let st = p.run();
    let (cert, order) = st.best.expect("search visits a leaf");
    let (flag_map, vertex_map) = p.rename(&order);
    CanonicalForm {
        certificate: encode(g, &cert),
        flag_map,
        vertex_map,
    }
}

/// The canonical representative of the isomorphism class of `g`.
pub fn canonical_graph(g: &SusyGraph) -> SusyGraph {
    let cf = canonical_form(g);
    isomorphism(g, &cf.flag_map, &cf.vertex_map)
        .expect("canonical renaming is injective")
        .target
}

/// An isomorphism `g1 → g2` fixing labels, if one exists.
pub fn are_isomorphic(g1: &SusyGraph, g2: &SusyGraph) -> Option<SusyMorphism> {
    let (c1, c2) = (canonical_form(g1), canonical_form(g2));
    if c1.certificate != c2.certificate {
        return None;
    }
    let from_canon: BTreeMap<&FlagId, &FlagId> = c1.flag_map.iter().map(|(a, b)| (b, a)).collect();
    let v_to_2: BTreeMap<&VertexId, &VertexId> = c2.vertex_map.iter().map(|(a, b)| (b, a)).collect();
    Some(SusyMorphism::new(
        g1.clone(),
        g2.clone(),
        c2.flag_map.iter().map(|(f2, c)| (f2.clone(), from_canon[c].clone())).collect(),
        c1.vertex_map.iter().map(|(v1, c)| (v1.clone(), v_to_2[c].clone())).collect(),
        [],
    ))
}

/// Automorphism group order with a generating set.
pub fn automorphisms(g: &SusyGraph, labels_fixed: bool) -> AutomorphismGroup {
    let p = Prepared::new(g, labels_fixed);
    let st = p.run();
    let (_, first) = st.best.as_ref().expect("search visits a leaf");
    let mut generators: Vec<Automorphism> = st.min_leaves[1..]
        .iter()
        .map(|leaf| p.lift(first, leaf))
        .collect();
    generators.extend(p.local_generators());
    AutomorphismGroup {
        order: st.min_leaves.len() as u64 * p.local_factor(),
        generators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn build(g: Graph, genus: &[(&str, u32)], r: &[&str]) -> SusyGraph {
        let color = g
            .flags
            .iter()
            .map(|f| (f.clone(), if r.contains(&f.as_str()) { Color::R } else { Color::Ns }))
            .collect();
        SusyGraph::self_labeled(g, genus.iter().map(|(v, x)| (VertexId::from(*v), *x)).collect(), color)
    }

    /// Counts structure-preserving flag permutations by trying them all.
    fn brute_aut(g: &SusyGraph, labels_fixed: bool) -> u64 {
        let flags: Vec<FlagId> = g.graph.flags.iter().cloned().collect();
        let mut count = 0;
        let mut perm: Vec<usize> = (0..flags.len()).collect();
        let check = |perm: &[usize]| -> bool {
            let sigma: BTreeMap<&FlagId, &FlagId> = flags.iter().zip(perm.iter().map(|&i| &flags[i])).collect();
            let mut vmap: BTreeMap<&VertexId, &VertexId> = BTreeMap::new();
            for f in &flags {
                let (v, w) = (g.graph.vertex_of(f), g.graph.vertex_of(sigma[f]));
                if *vmap.entry(v).or_insert(w) != w {
                    return false;
                }
                if sigma[g.graph.partner(f)] != g.graph.partner(sigma[f]) || g.color_of(f) != g.color_of(sigma[f]) {
                    return false;
                }
                if labels_fixed && g.graph.is_tail(f) && g.labeling.label_of(f) != g.labeling.label_of(sigma[f]) {
                    return false;
                }
            }
            let image: std::collections::BTreeSet<_> = vmap.values().collect();
            vmap.len() == g.graph.vertices.len()
                && image.len() == vmap.len()
                && vmap.iter().all(|(v, w)| g.genus_of(v) == g.genus_of(w))
        };
        permute(&mut perm, 0, &mut |p| {
            if check(p) {
                count += 1;
            }
        });
        count
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    fn tree(split: [[&str; 2]; 2]) -> SusyGraph {
        let mut g = Graph::corolla("u", split[0]);
        for t in split[1] {
            g.add_flag(t, "w");
        }
        g.add_edge("a", "u", "b", "w");
        build(g, &[("u", 0), ("w", 0)], &[])
    }

    #[test]
    fn renamed_copy_is_isomorphic() {
        let g = tree([["1", "2"], ["3", "4"]]);
        let mut h = Graph::corolla("X", ["3", "4"]);
        h.add_flag("1", "Y");
        h.add_flag("2", "Y");
        h.add_edge("q", "X", "p", "Y");
        let h = build(h, &[("X", 0), ("Y", 0)], &[]);
        let iso = are_isomorphic(&g, &h).expect("isomorphic");
        assert!(iso.validate_susy().is_valid(), "{}", iso.validate_susy());
        assert!(iso.preserves_tail_labels());
        assert_eq!(canonical_graph(&g), canonical_graph(&h));
    }

    #[test]
    fn label_splits_differ() {
        let a = tree([["1", "2"], ["3", "4"]]);
        let b = tree([["1", "3"], ["2", "4"]]);
        assert!(are_isomorphic(&a, &b).is_none());
        assert_ne!(canonical_form_with(&a, true).certificate, canonical_form_with(&b, true).certificate);
        assert_eq!(canonical_form_with(&a, false).certificate, canonical_form_with(&b, false).certificate);
    }

    #[test]
    fn loop_colors_differ() {
        let mut g = Graph::corolla("v", ["x", "y", "t"]);
        g.join("x", "y");
        let ns = build(g.clone(), &[("v", 0)], &[]);
        let r = build(g, &[("v", 0)], &["x", "y"]);
        assert!(are_isomorphic(&ns, &r).is_none());
    }

    #[test]
    fn corolla_groups() {
        let g = build(Graph::corolla("v", ["1", "2", "3", "4"]), &[("v", 0)], &["3", "4"]);
        assert_eq!(automorphisms(&g, true).order, 1);
        assert_eq!(automorphisms(&g, false).order, 4);
        assert_eq!(brute_aut(&g, false), 4);
    }

    #[test]
    fn double_edge_group() {
        let mut g = Graph::empty();
        g.add_edge("a", "u", "b", "w");
        g.add_edge("c", "u", "d", "w");
        let g = build(g, &[("u", 1), ("w", 1)], &[]);
        let aut = automorphisms(&g, true);
        assert_eq!(aut.order, brute_aut(&g, true));
        assert_eq!(aut.order, 4);
        assert!(aut.generators.iter().any(|a| a.vertices[&VertexId::from("u")] == VertexId::from("w")));
    }

    #[test]
    fn loops_and_tails_against_brute_force() {
        let mut g = Graph::corolla("u", ["a", "b", "c", "d", "s", "t"]);
        g.join("a", "b");
        g.join("c", "d");
        g.add_edge("e", "u", "f", "w");
        let g = build(g, &[("u", 0), ("w", 1)], &[]);
        for fixed in [true, false] {
            assert_eq!(automorphisms(&g, fixed).order, brute_aut(&g, fixed), "labels fixed: {fixed}");
        }
    }

    #[test]
    fn generators_are_automorphisms() {
        let mut g = Graph::empty();
        for (a, b) in [("a", "b"), ("c", "d"), ("e", "f")] {
            g.add_edge(a, "u", b, "w");
        }
        let g = build(g, &[("u", 0), ("w", 0)], &[]);
        let aut = automorphisms(&g, true);
        assert_eq!(aut.order, 12);
        for a in &aut.generators {
            let flag_map = a.flags.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
            let m = SusyMorphism::new(g.clone(), g.clone(), flag_map, a.vertices.clone(), []);
            assert!(m.validate_susy().is_valid(), "{}", m.validate_susy());
        }
    }
}
