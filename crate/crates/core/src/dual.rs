//! Combinatorial nodal SUSY curves and their dual graphs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ids::{FlagId, Label, VertexId};
use crate::report::ValidationReport;
use crate::susy::{Color, SusyGraph, SusyLabeling};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Puncture,
    #[serde(alias = "node_half")]
    Node,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecialPoint {
    pub id: FlagId,
    pub color: Color,
    pub kind: PointKind,
    /// Puncture label; defaults to the point identifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    /// Defaults to `C<index>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<VertexId>,
    pub genus: u32,
    pub special_points: Vec<SpecialPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub components: Vec<Component>,
    #[serde(default)]
    pub node_pairing: Vec<(FlagId, FlagId)>,
}

impl SpecialPoint {
    pub fn label(&self) -> Label {
        self.label.clone().unwrap_or_else(|| self.id.to_label())
    }
}

impl CurveConfig {
    pub fn component_id(&self, i: usize) -> VertexId {
        self.components[i]
            .id
            .clone()
            .unwrap_or_else(|| VertexId(format!("C{i}")))
    }

    fn points(&self) -> impl Iterator<Item = (usize, &SpecialPoint)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.special_points.iter().map(move |p| (i, p)))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        let mut ids = BTreeSet::new();
        for i in 0..self.components.len() {
            if !ids.insert(self.component_id(i)) {
                report.push("duplicate component", self.component_id(i).to_string());
            }
        }
        let mut points: BTreeMap<&FlagId, &SpecialPoint> = BTreeMap::new();
        for (_, p) in self.points() {
            if points.insert(&p.id, p).is_some() {
                report.push("duplicate special point", p.id.to_string());
            }
            if p.kind == PointKind::Node && p.label.is_some() {
                report.push("labeled node", p.id.to_string());
            }
        }
        let mut labels = BTreeSet::new();
        for (_, p) in self.points().filter(|(_, p)| p.kind == PointKind::Puncture) {
            if !labels.insert(p.label()) {
                report.push("duplicate puncture label", p.label().to_string());
            }
        }

        let mut paired = BTreeSet::new();
        for (a, b) in &self.node_pairing {
            if a == b {
                report.push("node paired with itself", a.to_string());
            }
            for x in [a, b] {
                match points.get(x) {
                    None => report.push("unknown node", x.to_string()),
                    Some(p) if p.kind != PointKind::Node => report.push("puncture in node pairing", x.to_string()),
                    Some(_) => {}
                }
                if !paired.insert(x) {
                    report.push("node paired twice", x.to_string());
                }
            }
            if let (Some(p), Some(q)) = (points.get(a), points.get(b)) {
                if p.color != q.color {
                    report.push("node halves of different color", format!("({a},{b}): {} vs {}", p.color, q.color));
                }
            }
        }
        for (id, p) in &points {
            if p.kind == PointKind::Node && !paired.contains(id) {
                report.push("unpaired node", id.to_string());
            }
        }

        for (i, c) in self.components.iter().enumerate() {
            let r = c.special_points.iter().filter(|p| p.color == Color::R).count();
            if r % 2 != 0 {
                report.push("odd Ramond count on component", format!("{} has {r}", self.component_id(i)));
            }
            if 2 * c.genus as i64 - 2 + c.special_points.len() as i64 <= 0 {
                report.push("unstable component", self.component_id(i).to_string());
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result(Error::InvalidConfig)
    }
}

/// Vertices are components, flags are special points, edges are nodes.
pub fn dual_graph(c: &CurveConfig) -> Result<SusyGraph> {
    c.ensure_valid()?;
    let mut graph = Graph::empty();
    let mut labeling = SusyLabeling::default();
    for (i, comp) in c.components.iter().enumerate() {
        let v = c.component_id(i);
        graph.add_vertex(v.clone());
        labeling.genus.insert(v.clone(), comp.genus);
        for p in &comp.special_points {
            graph.add_flag(p.id.clone(), v.clone());
            labeling.color.insert(p.id.clone(), p.color);
            if p.kind == PointKind::Puncture {
                labeling.labels_mut(p.color).insert(p.label(), p.id.clone());
            }
        }
    }
    for (a, b) in &c.node_pairing {
        graph.join(a.clone(), b.clone());
    }
    let g = SusyGraph::new(graph, labeling);
    g.ensure_valid()?;
    Ok(g)
}

/// Modular dual graph of the curve with its parity data forgotten.
pub fn modular_dual_graph(c: &CurveConfig) -> Result<SusyGraph> {
    c.ensure_valid()?;
    let mut boundary = BTreeMap::new();
    let mut genus = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for (i, comp) in c.components.iter().enumerate() {
        genus.insert(c.component_id(i), comp.genus);
        for p in &comp.special_points {
            boundary.insert(p.id.clone(), c.component_id(i));
            if p.kind == PointKind::Puncture {
                labels.insert(p.label(), p.id.clone());
            }
        }
    }
    let mut involution: BTreeMap<FlagId, FlagId> =
        boundary.keys().map(|f| (f.clone(), f.clone())).collect();
    for (a, b) in &c.node_pairing {
        involution.insert(a.clone(), b.clone());
        involution.insert(b.clone(), a.clone());
    }
    let graph = Graph {
        flags: boundary.keys().cloned().collect(),
        vertices: genus.keys().cloned().collect(),
        boundary,
        involution,
    };
    Ok(SusyGraph::modular(graph, genus, labels))
}

/// `forget(dual_graph(c))` equals the modular dual graph of `c`.
pub fn reduction_compatibility(c: &CurveConfig) -> Result<bool> {
    Ok(dual_graph(c)?.forget() == modular_dual_graph(c)?)
}
