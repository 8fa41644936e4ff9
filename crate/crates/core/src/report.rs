//! Text, JSON and DOT reports of minimization results.

use std::fmt::Write;

use crate::minimize::{GreedyResult, ReductionGraph, TraceStep};
use crate::model::Cad;
use crate::serialize::to_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            _ => Err(crate::Error::Parse(format!("unknown output format `{s}`"))),
        }
    }
}

fn counts(out: &mut String, cad: &Cad) {
    for (k, n) in cad.level_counts().iter().enumerate() {
        let _ = writeln!(out, "level {}: {} cells", k + 1, n);
    }
}

fn trace_lines(out: &mut String, trace: &[TraceStep]) {
    let _ = writeln!(out, "trace: {} reductions", trace.len());
    for (i, s) in trace.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {:>3}. site {} at level {}: {} -> {} cells",
            i + 1,
            s.site,
            s.level,
            s.cells_before,
            s.cells_after
        );
    }
}

pub fn greedy_text(r: &GreedyResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "initial CAD:");
    counts(&mut out, &r.initial);
    let _ = writeln!(out, "minimized CAD:");
    counts(&mut out, &r.cad);
    trace_lines(&mut out, &r.trace);
    for cert in &r.obstructions {
        let _ = writeln!(
            out,
            "curtain obstruction: site {} section {} not reduced",
            cert.site, cert.section
        );
    }
    out
}

pub fn greedy_json(r: &GreedyResult) -> String {
    to_json(&r.cad)
}

/// The trace as a chain graph.
pub fn greedy_dot(r: &GreedyResult) -> String {
    let mut out = String::from("digraph reductions {\n");
    let mut counts = vec![r.initial.top_count()];
    counts.extend(r.trace.iter().map(|s| s.cells_after));
    for (i, c) in counts.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{c}\"];");
    }
    for (i, s) in r.trace.iter().enumerate() {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", i, i + 1, s.site);
    }
    out.push_str("}\n");
    out
}

pub fn graph_text(g: &ReductionGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "reduction graph: {} nodes, {} edges, {} normal forms{}",
        g.nodes.len(),
        g.edges.len(),
        g.normal_forms.len(),
        if g.incomplete { " (incomplete: node budget exhausted)" } else { "" }
    );
    let _ = writeln!(out, "start:");
    counts(&mut out, &g.nodes[&g.root].cad);
    for (i, k) in g.normal_forms.iter().enumerate() {
        let _ = writeln!(out, "normal form {} ({}):", i + 1, &k[..12]);
        counts(&mut out, &g.nodes[k].cad);
    }
    for (node, cert) in &g.obstructions {
        let _ = writeln!(
            out,
            "curtain obstruction at node {}: site {} section {}",
            &node[..12],
            cert.site,
            cert.section
        );
    }
    out
}

/// The unique normal form, or a JSON array of all normal forms.
pub fn graph_json(g: &ReductionGraph) -> String {
    let docs: Vec<String> = g.normal_forms.iter().map(|k| to_json(&g.nodes[k].cad)).collect();
    if docs.len() == 1 {
        docs.into_iter().next().unwrap()
    } else {
        format!("[\n{}\n]", docs.join(",\n"))
    }
}

pub fn graph_dot(g: &ReductionGraph) -> String {
    let mut out = String::from("digraph reductions {\n");
    let ids: std::collections::BTreeMap<&String, usize> =
        g.nodes.keys().enumerate().map(|(i, k)| (k, i)).collect();
    for (k, node) in &g.nodes {
        let shape = if g.normal_forms.contains(k) { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  n{} [label=\"{}\"{}];", ids[k], node.cad.top_count(), shape);
    }
    for e in &g.edges {
        let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", ids[&e.from], ids[&e.to], e.site);
    }
    out.push_str("}\n");
    out
}
