//! Brute-force enumeration of stable graphs as vertex-labeled multigraphs.

use std::collections::BTreeSet;

type Key = (Vec<u32>, Vec<usize>, Vec<(usize, usize, bool)>);

#[derive(Clone, Debug)]
pub struct Shape {
    pub genus: Vec<u32>,
    pub tails: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn key(s: &Shape, colors: &[bool]) -> Key {
    permutations(s.genus.len())
        .into_iter()
        .map(|p| {
            let mut genus = vec![0; s.genus.len()];
            for (v, g) in s.genus.iter().enumerate() {
                genus[p[v]] = *g;
            }
            let tails = s.tails.iter().map(|v| p[*v]).collect();
            let mut edges: Vec<(usize, usize, bool)> = s
                .edges
                .iter()
                .zip(colors)
                .map(|((a, b), c)| (p[*a].min(p[*b]), p[*a].max(p[*b]), *c))
                .collect();
            edges.sort();
            (genus, tails, edges)
        })
        .min()
        .unwrap()
}

fn multisets(items: &[(usize, usize)], k: usize, from: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in from..items.len() {
        for mut rest in multisets(items, k - 1, i) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|x| {
            compositions(total - x, parts - 1).into_iter().map(move |mut r| {
                r.insert(0, x);
                r
            })
        })
        .collect()
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn stable(s: &Shape) -> bool {
    let mut degree = vec![0i64; s.genus.len()];
    for t in &s.tails {
        degree[*t] += 1;
    }
    for (a, b) in &s.edges {
        degree[*a] += 1;
        degree[*b] += 1;
    }
    s.genus.iter().zip(&degree).all(|(g, d)| 2 * *g as i64 - 2 + d > 0)
}

/// Stable genus-`g` graphs with `n` labeled tails, one per isomorphism class.
pub fn brute_shapes(g: u32, n: usize) -> Vec<Shape> {
    let max_v = (2 * g as usize + n).saturating_sub(2).max(1);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for v in 1..=max_v {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        for b1 in 0..=g {
            let e = v - 1 + b1 as usize;
            let edge_sets = multisets(&pairs, e, 0);
            for genus in compositions(g - b1, v) {
                for code in 0..v.pow(n as u32) {
                    let tails: Vec<usize> = (0..n).map(|i| code / v.pow(i as u32) % v).collect();
                    for edges in &edge_sets {
                        let s = Shape { genus: genus.clone(), tails: tails.clone(), edges: edges.clone() };
                        if !connected(v, edges) || !stable(&s) {
                            continue;
                        }
                        if seen.insert(key(&s, &vec![false; e])) {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Ramond parity at every vertex, `r_tails` marking the Ramond tail labels.
pub fn valid_colorings(s: &Shape, r_tails: &[bool]) -> Vec<Vec<bool>> {
    let e = s.edges.len();
    (0u32..1 << e)
        .map(|mask| (0..e).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|colors| {
            let mut parity = vec![0usize; s.genus.len()];
            for (t, r) in s.tails.iter().zip(r_tails) {
                parity[*t] += usize::from(*r);
            }
            for ((a, b), c) in s.edges.iter().zip(colors) {
                parity[*a] += usize::from(*c);
                parity[*b] += usize::from(*c);
            }
            parity.iter().all(|p| p % 2 == 0)
        })
        .collect()
}

pub fn brute_strata(g: u32, ns: usize, r: usize) -> (usize, Vec<(usize, usize)>) {
    let r_tails: Vec<bool> = (0..ns + r).map(|i| i >= ns).collect();
    let mut classes = BTreeSet::new();
    let mut per_shape = Vec::new();
    for s in brute_shapes(g, ns + r) {
        let colorings = valid_colorings(&s, &r_tails);
        let b1 = s.edges.len() + 1 - s.genus.len();
        per_shape.push((colorings.len(), 1 << b1));
        for c in colorings {
            classes.insert(key(&s, &c));
        }
    }
    (classes.len(), per_shape)
}

