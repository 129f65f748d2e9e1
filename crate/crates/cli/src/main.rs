mod dot;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use susy_kit::calculus::decompose_to_elementaries;
use susy_kit::dual::{dual_graph, CurveConfig};
use susy_kit::enumerate::{contraction_poset, enumerate_strata, DEFAULT_MAX_EDGES};
use susy_kit::io::{read_graphs, GraphDoc, MorphismDoc, StratumRecord};
use susy_kit::lift::{lift_tree_coloring, TailPartition};
use susy_kit::operad::{check_operad_axioms, evaluate_operad, evaluate_via_elementaries, stratum_dimension, GluingRecipe};
use susy_kit::{Edge, Error, Label, SusyGraph, ValidationReport};

#[derive(Parser)]
#[command(name = "susy-kit", version, about = "SUSY graphs, gluing recipes and boundary strata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; not every command supports every format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Search limit on edges for enumeration.
    #[arg(long, env = "SUSY_KIT_MAX_EDGES", default_value_t = DEFAULT_MAX_EDGES, global = true)]
    max_edges: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check a graph or morphism document; `-` reads stdin.
    Validate { input: PathBuf },
    /// Unique SUSY structure on a stable tree for the given tail split.
    Lift {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, value_delimiter = ',')]
        ns: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        r: Vec<String>,
    },
    /// Dual graph of a nodal curve configuration.
    DualGraph { input: PathBuf },
    /// Boundary strata for genus G with k NS and m Ramond punctures.
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        ns: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        poset: bool,
    },
    /// Super-dimension and codimension of a stratum.
    Dims { input: PathBuf },
    /// Gluing recipe of a morphism.
    Evaluate {
        input: PathBuf,
        /// Evaluate through the elementary decomposition instead.
        #[arg(long)]
        via_elementaries: bool,
    },
    /// Elementary decomposition of a morphism.
    Decompose { input: PathBuf },
    /// Randomized check of the operad axioms.
    CheckAxioms {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
    },
    /// Graphviz rendering of a graph or a strata list.
    ExportDot { input: PathBuf },
}

enum Failure {
    /// Exit 1, with a machine-readable report.
    Invalid(Value),
    /// Exit 2.
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_) | Error::Io(_) => Failure::Malformed(e.to_string()),
            Error::InvalidGraph(r) | Error::InvalidMorphism(r) | Error::InvalidConfig(r) | Error::InvalidRecipe(r) => {
                Failure::Invalid(report_json(&r))
            }
            other => Failure::Invalid(json!({ "valid": false, "error": other.to_string() })),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Malformed(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn report_json(r: &ValidationReport) -> Value {
    json!({ "valid": r.is_valid(), "violations": r.violations })
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Malformed(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn base_dir(path: &Path) -> Option<&Path> {
    (path != Path::new("-")).then(|| path.parent()).flatten()
}

fn pretty<T: Serialize>(value: &T) -> Outcome {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn unsupported(format: Format, command: &str) -> Failure {
    let name = match format {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Table => "table",
    };
    Failure::Malformed(format!("format {name} is not available for {command}"))
}

fn decorated(doc: &GraphDoc) -> Result<SusyGraph, Failure> {
    if doc.genus.is_none() {
        return Err(Failure::Malformed("graph document has no `genus`".into()));
    }
    Ok(doc.susy()?)
}

fn graph_out(g: &SusyGraph, format: Format, command: &str) -> Outcome {
    let doc = GraphDoc::from_susy(g);
    match format {
        Format::Json => pretty(&doc),
        Format::Dot => Ok(dot::render(&[doc])),
        Format::Table => Err(unsupported(format, command)),
    }
}

fn validate(path: &Path, format: Format) -> Outcome {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let (kind, report, stable) = if value.get("flag_map").is_some() {
        let doc: MorphismDoc = serde_json::from_value(value)?;
        let base = base_dir(path);
        let decorated = [&doc.source, &doc.target]
            .into_iter()
            .map(|r| r.resolve(base).map(|d| d.genus.is_some()))
            .collect::<Result<Vec<_>, _>>()?;
        if decorated.iter().all(|d| *d) {
            ("susy_morphism", doc.susy(base)?.validate_susy(), None)
        } else {
            ("morphism", doc.plain(base)?.validate(), None)
        }
    } else {
        let doc: GraphDoc = serde_json::from_value(value)?;
        if doc.genus.is_some() {
            let g = doc.susy()?;
            let report = g.validate();
            let stable = report.is_valid().then(|| g.is_stable());
            (if g.modular { "modular_graph" } else { "susy_graph" }, report, stable)
        } else {
            ("graph", doc.graph().validate(), None)
        }
    };
    let mut v = json!({ "kind": kind, "valid": report.is_valid(), "violations": report.violations });
    if let Some(s) = stable {
        v["stable"] = json!(s);
    }
    if !report.is_valid() {
        return Err(Failure::Invalid(v));
    }
    match format {
        Format::Json => pretty(&v),
        Format::Table => Ok(format!("{kind}: valid{}\n", if stable == Some(false) { ", unstable" } else { "" })),
        Format::Dot => Err(unsupported(format, "validate")),
    }
}

fn lift(path: &Path, ns: &[String], r: &[String], format: Format) -> Outcome {
    let doc: GraphDoc = serde_json::from_str(&read_input(path)?)?;
    let tree = if doc.genus.is_some() {
        doc.susy()?.forget()
    } else {
        let mut d = doc.clone();
        d.genus = Some(doc.vertices.iter().map(|v| (v.clone(), 0)).collect());
        d.susy()?
    };
    let partition = TailPartition::new(ns.iter().cloned(), r.iter().cloned());
    graph_out(&lift_tree_coloring(&tree, &partition)?, format, "lift")
}

fn dual(path: &Path, format: Format) -> Outcome {
    let config: CurveConfig = serde_json::from_str(&read_input(path)?)?;
    graph_out(&dual_graph(&config)?, format, "dual-graph")
}

/// NS punctures are labeled `1..=ns`, Ramond punctures continue the count.
fn labels(from: usize, k: usize) -> Vec<Label> {
    (from..from + k).map(|i| Label(i.to_string())).collect()
}

fn enumerate(genus: u32, ns: usize, r: usize, poset: bool, max_edges: usize, format: Format) -> Outcome {
    let strata = enumerate_strata(genus, &labels(1, ns), &labels(ns + 1, r), max_edges)?;
    let records: Vec<StratumRecord> = strata.iter().map(StratumRecord::from).collect();
    let order = if poset { Some(contraction_poset(&strata)?) } else { None };
    match format {
        Format::Json => match order {
            Some(p) => pretty(&json!({ "strata": records, "poset": p })),
            None => pretty(&records),
        },
        Format::Dot => Ok(dot::render(&records.into_iter().map(|r| r.graph).collect::<Vec<_>>())),
        Format::Table => {
            let mut s = String::from("index\tvertices\tedges\tR-edges\tmultiplicity\tcovers\n");
            for (i, st) in strata.iter().enumerate() {
                let covers = order
                    .as_ref()
                    .map(|p| p.covers[i].iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
                    .unwrap_or_default();
                s += &format!(
                    "{i}\t{}\t{}\t{}\t{}\t{covers}\n",
                    st.graph.graph.vertices.len(),
                    st.graph.graph.edge_count(),
                    st.graph.edges_of_color(susy_kit::Color::R).len(),
                    st.multiplicity
                );
            }
            Ok(s)
        }
    }
}

fn dims(path: &Path, format: Format) -> Outcome {
    let doc: GraphDoc = serde_json::from_str(&read_input(path)?)?;
    let d = stratum_dimension(&decorated(&doc)?)?;
    match format {
        Format::Json => Ok(serde_json::to_string(&d)? + "\n"),
        Format::Table => Ok(format!("dimension {}|{}\ncodimension {}|{}\n", d.even, d.odd, d.codim.0, d.codim.1)),
        Format::Dot => Err(unsupported(format, "dims")),
    }
}

fn morphism(path: &Path) -> Result<susy_kit::SusyMorphism, Failure> {
    let doc: MorphismDoc = serde_json::from_str(&read_input(path)?)?;
    let base = base_dir(path);
    for r in [&doc.source, &doc.target] {
        if r.resolve(base)?.genus.is_none() {
            return Err(Failure::Malformed("morphism endpoints need `genus`".into()));
        }
    }
    Ok(doc.susy(base)?)
}

fn recipe_table(r: &GluingRecipe) -> String {
    let mut s = format!("{} -> {}\n", r.source, r.target);
    for (i, t) in r.assignment.iter().enumerate() {
        s += &format!("factor {i} -> {t}\n");
    }
    for (c, gl) in [("NS", &r.ns_gluings), ("R", &r.r_gluings)] {
        for (t, pairs) in gl.iter().enumerate() {
            for (a, b) in pairs {
                s += &format!("glue {c} ({a},{b}) into {t}\n");
            }
        }
    }
    for (a, b) in &r.relabeling {
        s += &format!("relabel {a} -> {b}\n");
    }
    s + &format!("ramond fiber rank {}\n", r.ramond_fiber_rank)
}

fn evaluate(path: &Path, via: bool, format: Format) -> Outcome {
    let h = morphism(path)?;
    let recipe = if via {
        let order: Vec<Edge> = h.contracted.iter().cloned().collect();
        evaluate_via_elementaries(&h, &order)?
    } else {
        evaluate_operad(&h)?
    };
    match format {
        Format::Json => pretty(&recipe),
        Format::Table => Ok(recipe_table(&recipe)),
        Format::Dot => Err(unsupported(format, "evaluate")),
    }
}

fn decompose(path: &Path, format: Format) -> Outcome {
    let h = morphism(path)?;
    h.ensure_valid_susy()?;
    let steps = decompose_to_elementaries(&h)?;
    match format {
        Format::Json => pretty(&steps),
        Format::Table => Ok(steps
            .iter()
            .map(|s| {
                let v = serde_json::to_value(&s.kind).unwrap_or(Value::Null);
                let kind = v["kind"].as_str().unwrap_or("?").to_owned();
                let detail = v.get("pair").or_else(|| v.get("pairs")).map(Value::to_string).unwrap_or_default();
                format!("{kind} {detail}").trim_end().to_owned() + "\n"
            })
            .collect()),
        Format::Dot => Err(unsupported(format, "decompose")),
    }
}

fn check_axioms(seed: u64, cases: u64, format: Format) -> Outcome {
    let report = check_operad_axioms(seed, cases as usize);
    let out = match format {
        Format::Json => pretty(&json!({ "passed": report.passed(), "report": report }))?,
        Format::Table => report
            .conditions
            .iter()
            .map(|c| format!("{}\t{}\t{}/{}\n", c.condition, c.name, c.cases - c.failures.len(), c.cases))
            .collect(),
        Format::Dot => return Err(unsupported(format, "check-axioms")),
    };
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure::Invalid(serde_json::to_value(&report)?))
    }
}

fn export_dot(path: &Path) -> Outcome {
    Ok(dot::render(&read_graphs(&read_input(path)?)?))
}

fn run(cli: Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Validate { input } => validate(input, f),
        Command::Lift { tree, ns, r } => lift(tree, ns, r, f),
        Command::DualGraph { input } => dual(input, f),
        Command::Enumerate { genus, ns, r, poset } => enumerate(*genus, *ns, *r, *poset, cli.max_edges, f),
        Command::Dims { input } => dims(input, f),
        Command::Evaluate { input, via_elementaries } => evaluate(input, *via_elementaries, f),
        Command::Decompose { input } => decompose(input, f),
        Command::CheckAxioms { seed, cases } => check_axioms(*seed, *cases, f),
        Command::ExportDot { input } => export_dot(input),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(report)) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap_or_default());
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
