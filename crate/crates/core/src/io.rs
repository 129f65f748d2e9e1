//! JSON interchange documents for graphs, morphisms and strata.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::enumerate::Stratum;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ids::{FlagId, Label, VertexId};
use crate::morphism::GraphMorphism;
use crate::susy::{Color, SusyGraph, SusyLabeling, SusyMorphism};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailLabels {
    #[serde(rename = "NS", default)]
    pub ns: BTreeMap<Label, FlagId>,
    #[serde(rename = "R", default)]
    pub r: BTreeMap<Label, FlagId>,
}

/// A graph, optionally decorated. `genus` without `color` denotes a
/// modular graph; `genus` with `color` a SUSY graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub flags: Vec<FlagId>,
    pub vertices: Vec<VertexId>,
    pub boundary: BTreeMap<FlagId, VertexId>,
    pub involution: BTreeMap<FlagId, FlagId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<BTreeMap<VertexId, u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<BTreeMap<FlagId, Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_labels: Option<TailLabels>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            flags: g.flags.iter().cloned().collect(),
            vertices: g.vertices.iter().cloned().collect(),
            boundary: g.boundary.clone(),
            involution: g.involution.clone(),
            genus: None,
            color: None,
            tail_labels: None,
        }
    }

    pub fn from_susy(g: &SusyGraph) -> Self {
        let mut doc = Self::from_graph(&g.graph);
        doc.genus = Some(g.labeling.genus.clone());
        if !g.modular {
            doc.color = Some(g.labeling.color.clone());
        }
        doc.tail_labels = Some(TailLabels {
            ns: g.labeling.ns_labels.clone(),
            r: g.labeling.r_labels.clone(),
        });
        doc
    }

    pub fn graph(&self) -> Graph {
        Graph {
            flags: self.flags.iter().cloned().collect(),
            vertices: self.vertices.iter().cloned().collect(),
            boundary: self.boundary.clone(),
            involution: self.involution.clone(),
        }
    }

    pub fn is_decorated(&self) -> bool {
        self.genus.is_some() || self.color.is_some() || self.tail_labels.is_some()
    }

    /// The decorated graph. Without `tail_labels`, every tail is labeled by
    /// its flag identifier.
    pub fn susy(&self) -> Result<SusyGraph> {
        let graph = self.graph();
        let genus = self
            .genus
            .clone()
            .ok_or_else(|| Error::Label("document has no genus labels".into()))?;
        let labels = match &self.tail_labels {
            Some(t) => t.clone(),
            None => {
                graph.ensure_valid()?;
                let mut t = TailLabels::default();
                for f in graph.tails() {
                    let c = self.color.as_ref().and_then(|m| m.get(&f)).copied().unwrap_or(Color::Ns);
                    match c {
                        Color::Ns => t.ns.insert(f.to_label(), f),
                        Color::R => t.r.insert(f.to_label(), f),
                    };
                }
                t
            }
        };
        match &self.color {
            None => {
                let mut merged = labels.ns;
                merged.extend(labels.r);
                Ok(SusyGraph::modular(graph, genus, merged))
            }
            Some(color) => Ok(SusyGraph::new(
                graph,
                SusyLabeling {
                    genus,
                    color: color.clone(),
                    ns_labels: labels.ns,
                    r_labels: labels.r,
                },
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    Inline(Box<GraphDoc>),
    Path(String),
}

impl GraphRef {
    pub fn resolve(&self, base: Option<&Path>) -> Result<GraphDoc> {
        match self {
            GraphRef::Inline(doc) => Ok((**doc).clone()),
            GraphRef::Path(p) => {
                let path = match base {
                    Some(dir) => dir.join(p),
                    None => p.into(),
                };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                Ok(serde_json::from_str(&text)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub source: GraphRef,
    pub target: GraphRef,
    pub flag_map: BTreeMap<FlagId, FlagId>,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    #[serde(default)]
    pub contracted_pairs: Vec<(FlagId, FlagId)>,
}

impl MorphismDoc {
    pub fn from_susy(h: &SusyMorphism) -> Self {
        Self {
            source: GraphRef::Inline(Box::new(GraphDoc::from_susy(&h.source))),
            target: GraphRef::Inline(Box::new(GraphDoc::from_susy(&h.target))),
            flag_map: h.flag_map.clone(),
            vertex_map: h.vertex_map.clone(),
            contracted_pairs: h.contracted.iter().cloned().collect(),
        }
    }

    pub fn plain(&self, base: Option<&Path>) -> Result<GraphMorphism> {
        Ok(GraphMorphism::new(
            self.source.resolve(base)?.graph(),
            self.target.resolve(base)?.graph(),
            self.flag_map.clone(),
            self.vertex_map.clone(),
            self.contracted_pairs.iter().cloned(),
        ))
    }

    pub fn susy(&self, base: Option<&Path>) -> Result<SusyMorphism> {
        Ok(SusyMorphism::new(
            self.source.resolve(base)?.susy()?,
            self.target.resolve(base)?.susy()?,
            self.flag_map.clone(),
            self.vertex_map.clone(),
            self.contracted_pairs.iter().cloned(),
        ))
    }
}

/// A stratum as a graph document plus its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumRecord {
    #[serde(flatten)]
    pub graph: GraphDoc,
    pub certificate: String,
    pub multiplicity: usize,
}

impl From<&Stratum> for StratumRecord {
    fn from(s: &Stratum) -> Self {
        Self {
            graph: GraphDoc::from_susy(&s.graph),
            certificate: s.certificate.clone(),
            multiplicity: s.multiplicity,
        }
    }
}

/// Reads one graph document, an array of stratum records, or an object
/// holding such an array under `strata`.
pub fn read_graphs(text: &str) -> Result<Vec<GraphDoc>> {
    let mut value: serde_json::Value = serde_json::from_str(text)?;
    if let Some(strata) = value.get_mut("strata") {
        value = strata.take();
    }
    match value {
        serde_json::Value::Array(items) => items
            .into_iter()
            .map(|mut item| {
                if let Some(obj) = item.as_object_mut() {
                    obj.remove("certificate");
                    obj.remove("multiplicity");
                }
                Ok(serde_json::from_value(item)?)
            })
            .collect(),
        other => Ok(vec![serde_json::from_value(other)?]),
    }
}
