use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::susy::{Color, SusyGraph};

/// Super-dimension `even | odd` of a stratum and its codimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumDimension {
    pub even: i64,
    pub odd: i64,
    pub codim: (usize, usize),
}

fn integral(x: Ratio<i64>, what: &str) -> Result<i64> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::HalfIntegerDimension(format!("{what} = {x}")))
    }
}

/// Closed forms and per-vertex sums, which must agree.
pub fn stratum_dimension(tau: &SusyGraph) -> Result<StratumDimension> {
    tau.ensure_valid()?;
    if !tau.graph.is_connected() {
        return Err(Error::Disconnected);
    }
    if !tau.is_stable() {
        return Err(Error::Unstable("stratum of an unstable graph".into()));
    }
    let t_ns = tau.tails_of_color(Color::Ns).len() as i64;
    let t_r = tau.tails_of_color(Color::R).len() as i64;
    if t_r % 2 != 0 {
        return Err(Error::OddRamond(t_r as usize));
    }
    let e = tau.graph.edge_count() as i64;
    let e_r = tau.edges_of_color(Color::R).len() as i64;
    let g = tau.genus() as i64;

    let even = 3 * g - 3 + t_ns + t_r - e;
    let odd = integral(Ratio::from(2 * g - 2 + t_ns) + Ratio::new(t_r, 2), "odd dimension")?;

    let mut even_sum = 0i64;
    let mut odd_sum = Ratio::from(e_r);
    for v in &tau.graph.vertices {
        let (ns, r) = tau.colored_star(v);
        let (gv, fns, fr) = (tau.genus_of(v) as i64, ns.len() as i64, r.len() as i64);
        even_sum += 3 * gv - 3 + fns + fr;
        odd_sum += Ratio::from(2 * gv - 2 + fns) + Ratio::new(fr, 2);
    }
    let odd_sum = integral(odd_sum, "per-vertex odd dimension")?;
    if (even, odd) != (even_sum, odd_sum) {
        return Err(Error::Inconsistent(format!(
            "closed forms give {even}|{odd}, per-vertex sums give {even_sum}|{odd_sum}"
        )));
    }
    Ok(StratumDimension {
        even,
        odd,
        codim: (e as usize, 0),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::graph::Graph;
    use crate::ids::{FlagId, VertexId};

    fn build(g: Graph, genus: &[(&str, u32)], r: &[&str]) -> SusyGraph {
        let color: BTreeMap<FlagId, Color> = g
            .flags
            .iter()
            .map(|f| (f.clone(), if r.contains(&f.as_str()) { Color::R } else { Color::Ns }))
            .collect();
        SusyGraph::self_labeled(g, genus.iter().map(|(v, x)| (VertexId::from(*v), *x)).collect(), color)
    }

    #[test]
    fn corolla_four_ns() {
        let d = stratum_dimension(&build(Graph::corolla("v", ["1", "2", "3", "4"]), &[("v", 0)], &[])).unwrap();
        assert_eq!((d.even, d.odd, d.codim), (1, 2, (0, 0)));
    }

    #[test]
    fn tree_with_one_edge() {
        let mut g = Graph::corolla("u", ["1", "2"]);
        g.add_flag("3", "w");
        g.add_flag("4", "w");
        g.add_edge("a", "u", "b", "w");
        let d = stratum_dimension(&build(g, &[("u", 0), ("w", 0)], &[])).unwrap();
        assert_eq!((d.even, d.odd, d.codim), (0, 2, (1, 0)));
    }

    #[test]
    fn mixed_corolla() {
        let d = stratum_dimension(&build(Graph::corolla("v", ["1", "2", "3", "4"]), &[("v", 0)], &["3", "4"])).unwrap();
        assert_eq!((d.even, d.odd), (1, 1));
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"even":1,"odd":1,"codim":[0,0]}"#);
    }

    #[test]
    fn ramond_edge_counts_in_odd_dimension() {
        let mut g = Graph::corolla("u", ["1", "2"]);
        g.add_flag("3", "w");
        g.add_flag("4", "w");
        g.add_edge("a", "u", "b", "w");
        let d = stratum_dimension(&build(g, &[("u", 0), ("w", 0)], &["1", "a", "b", "3"])).unwrap();
        assert_eq!((d.even, d.odd), (0, 1));
    }

    #[test]
    fn disconnected_rejected() {
        let mut g = Graph::corolla("u", ["1", "2", "3"]);
        for t in ["4", "5", "6"] {
            g.add_flag(t, "w");
        }
        assert!(matches!(
            stratum_dimension(&build(g, &[("u", 0), ("w", 0)], &[])),
            Err(Error::Disconnected)
        ));
    }
}
