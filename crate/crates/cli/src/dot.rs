use std::fmt::Write;

use susy_kit::io::GraphDoc;
use susy_kit::{Color, Graph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn style(doc: &GraphDoc, f: &susy_kit::FlagId) -> &'static str {
    match doc.color.as_ref().and_then(|c| c.get(f)) {
        Some(Color::R) => "dashed",
        _ => "solid",
    }
}

fn tail_label(doc: &GraphDoc, f: &susy_kit::FlagId) -> String {
    let labels = doc.tail_labels.as_ref();
    labels
        .and_then(|t| t.ns.iter().chain(&t.r).find(|(_, x)| *x == f).map(|(l, _)| l.to_string()))
        .unwrap_or_else(|| f.to_string())
}

/// Body lines of one graph, node names prefixed by `prefix`.
fn body(out: &mut String, doc: &GraphDoc, prefix: &str, indent: &str) {
    let g: Graph = doc.graph();
    for v in &g.vertices {
        let label = match doc.genus.as_ref().and_then(|m| m.get(v)) {
            Some(x) => format!("g={x}"),
            None => v.to_string(),
        };
        let _ = writeln!(out, "{indent}{} [label={}];", quote(&format!("{prefix}{v}")), quote(&label));
    }
    for f in g.tails() {
        let anchor = quote(&format!("{prefix}tail:{f}"));
        let _ = writeln!(out, "{indent}{anchor} [shape=point];");
        let _ = writeln!(
            out,
            "{indent}{} -- {anchor} [style={}, label={}];",
            quote(&format!("{prefix}{}", g.vertex_of(&f))),
            style(doc, &f),
            quote(&tail_label(doc, &f))
        );
    }
    for (a, b) in g.edges() {
        let _ = writeln!(
            out,
            "{indent}{} -- {} [style={}];",
            quote(&format!("{prefix}{}", g.vertex_of(&a))),
            quote(&format!("{prefix}{}", g.vertex_of(&b))),
            style(doc, &a)
        );
    }
}

/// NS edges solid, R edges dashed, vertices labeled by genus, tails drawn to
/// point anchors. Several graphs become one cluster each.
pub fn render(docs: &[GraphDoc]) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    if let [doc] = docs {
        body(&mut out, doc, "", "  ");
    } else {
        for (k, doc) in docs.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{k} {{\n    label=\"stratum {k}\";");
            body(&mut out, doc, &format!("s{k}:"), "    ");
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}
