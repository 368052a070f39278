use std::fmt::Write;

use super::{to_render_graph, EdgeStyle, NodeKind, RenderGraph};
use crate::engine::QueryResult;

/// Escapes text for a record label.
fn record_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '{' | '}' | '|' | '<' | '>' | '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn quote_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz source for a result. Boxes are records with a title cell and a
/// left-aligned feature cell.
pub fn to_dot(result: &QueryResult) -> String {
    graph_to_dot(&to_render_graph(result))
}

pub fn graph_to_dot(g: &RenderGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph skiql {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=record, style=filled, fontname=\"Helvetica\", fontsize=10];\n");
    out.push_str("  edge [fontname=\"Helvetica\", fontsize=9];\n");
    for n in &g.nodes {
        match n.kind {
            NodeKind::Junction => {
                let _ = writeln!(out, "  {} [shape=point, width=0.06, label=\"\"];", n.id);
            }
            NodeKind::Message => {
                let _ = writeln!(
                    out,
                    "  {} [shape=note, fillcolor=\"{}\", label=\"{}\"];",
                    n.id,
                    n.color,
                    quote_escape(&n.title)
                );
            }
            NodeKind::Entity | NodeKind::Relationship => {
                let mut title = String::new();
                if let Some(s) = &n.stereotype {
                    title.push_str(&record_escape(s));
                    title.push_str("\\n");
                }
                title.push_str(&record_escape(&n.title));
                let label = if n.lines.is_empty() {
                    format!("{{{title}}}")
                } else {
                    let body: String = n
                        .lines
                        .iter()
                        .map(|l| format!("{}\\l", record_escape(l)))
                        .collect();
                    format!("{{{title}|{body}}}")
                };
                let _ = writeln!(
                    out,
                    "  {} [fillcolor=\"{}\", label=\"{}\"];",
                    n.id,
                    n.color,
                    label
                );
            }
        }
    }
    for e in &g.edges {
        let attrs = match e.style {
            EdgeStyle::Aggregation => "dir=both, arrowtail=diamond, arrowhead=vee",
            EdgeStyle::Reference if e.continues => "arrowhead=none",
            EdgeStyle::Reference => "arrowhead=vee",
            EdgeStyle::Featuring => "style=dashed, arrowhead=none",
        };
        if e.label.is_empty() {
            let _ = writeln!(out, "  {} -> {} [{attrs}];", e.from, e.to);
        } else {
            let _ = writeln!(
                out,
                "  {} -> {} [{attrs}, label=\"{}\"];",
                e.from,
                e.to,
                quote_escape(&e.label)
            );
        }
    }
    out.push_str("}\n");
    out
}
