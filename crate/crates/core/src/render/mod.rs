//! Presentation of query results.
//!
//! [`to_render_graph`] lays a result out as labelled boxes and edges in the
//! style of UML class diagrams. The same graph is serialized as Graphviz
//! DOT ([`to_dot`]) or as graph-JSON ([`to_graph_json`]), the format the
//! web console draws. [`to_table`] gives a plain text listing.

mod dot;
mod table;

pub use dot::to_dot;
pub use table::{to_table, ResultTable, TableSection};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::{NodeKey, NodeSlot, QueryResult, ResultNode};
use crate::model::{Feature, FeatureClass, SchemaTypeKind, StructuralVariation};

pub const GRAPH_JSON_VERSION: u32 = 1;

/// The published JSON schema of graph-JSON documents.
pub const GRAPH_JSON_SCHEMA: &str = include_str!("../../schema/graph-json-v1.schema.json");

pub const COLOR_ROOT: &str = "#FFFFE0";
pub const COLOR_AGGREGATED: &str = "#D3D3D3";
pub const COLOR_RELATIONSHIP: &str = "#ADD8E6";
pub const COLOR_PLAIN: &str = "#FFFFFF";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum NodeKind {
    Entity,
    Relationship,
    /// A bend point joining a reference to the relationship type featuring it.
    Junction,
    Message,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeStyle {
    Aggregation,
    Reference,
    Featuring,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderNode {
    pub id: String,
    pub kind: NodeKind,
    pub title: String,
    pub lines: Vec<String>,
    pub color: String,
    pub stereotype: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderEdge {
    pub from: String,
    pub to: String,
    pub style: EdgeStyle,
    pub label: String,
    /// Junction edges carry the reference label on their first half only.
    #[serde(default, skip_serializing_if = "is_false")]
    pub continues: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderGraph {
    pub format_version: u32,
    pub nodes: Vec<RenderNode>,
    pub edges: Vec<RenderEdge>,
}

fn prefix(classes: &BTreeMap<String, FeatureClass>, name: &str) -> char {
    classes.get(name).map_or(' ', |c| c.prefix())
}

/// One diagram line per feature; relationships only when not drawn as edges.
pub fn feature_lines(node: &ResultNode, timeline: bool) -> Vec<String> {
    let Some(v) = &node.variation else {
        return vec![];
    };
    let mut lines = Vec::new();
    if timeline {
        if let Some(d) = v.first_seen {
            lines.push(format!("first seen {d}"));
        }
    }
    for f in &v.features {
        match f {
            Feature::Attribute(a) => lines.push(format!(
                "{}{}: {}",
                prefix(&node.feature_classes, &a.name),
                a.name,
                a.data_type
            )),
            Feature::Key(k) => lines.push(format!("Key {}: {}", k.name, key_type(v, &k.attribute_names))),
            Feature::Reference(r) if node.inline.contains(&r.name) => lines.push(format!(
                "{}{}: -- {} {}",
                prefix(&node.feature_classes, &r.name),
                r.name,
                r.cardinality,
                r.target
            )),
            Feature::Aggregate(a) if node.inline.contains(&a.name) => lines.push(format!(
                "{}{}: <>- {} {}",
                prefix(&node.feature_classes, &a.name),
                a.name,
                a.cardinality,
                a.target
            )),
            Feature::Reference(_) | Feature::Aggregate(_) => {}
        }
    }
    lines
}

fn key_type(v: &StructuralVariation, attributes: &[String]) -> String {
    let types: Vec<String> = attributes
        .iter()
        .map(|a| match v.feature(a) {
            Some(Feature::Attribute(attr)) => attr.data_type.to_string(),
            _ => "?".to_string(),
        })
        .collect();
    if types.len() == 1 {
        types.into_iter().next().unwrap_or_default()
    } else {
        format!("({})", types.join(", "))
    }
}

fn color(node: &ResultNode) -> &'static str {
    match (node.key.kind, node.key.slot) {
        (_, NodeSlot::Type) => COLOR_PLAIN,
        (SchemaTypeKind::Relationship, _) => COLOR_RELATIONSHIP,
        (SchemaTypeKind::Entity, _) if node.root => COLOR_ROOT,
        (SchemaTypeKind::Entity, _) => COLOR_AGGREGATED,
    }
}

fn source_prefix(result: &QueryResult, from: &NodeKey, feature: &str) -> char {
    result
        .node(from)
        .map_or(' ', |n| prefix(&n.feature_classes, feature))
}

fn edge_label(result: &QueryResult, from: &NodeKey, feature: &str, card: impl std::fmt::Display) -> String {
    let p = source_prefix(result, from, feature);
    format!("{p} {card} {feature}").trim_start().to_string()
}

/// Lays out a result. Node ids are `n<i>` in result order, `j<i>` for
/// junctions and `m0` for the message of an empty result.
pub fn to_render_graph(result: &QueryResult) -> RenderGraph {
    let ids: BTreeMap<&NodeKey, String> = result
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (&n.key, format!("n{i}")))
        .collect();
    let mut nodes: Vec<RenderNode> = result
        .nodes
        .iter()
        .map(|n| RenderNode {
            id: ids[&n.key].clone(),
            kind: match n.key.kind {
                SchemaTypeKind::Entity => NodeKind::Entity,
                SchemaTypeKind::Relationship => NodeKind::Relationship,
            },
            title: n.key.to_string(),
            lines: feature_lines(n, result.timeline),
            color: color(n).to_string(),
            stereotype: Some(
                match n.key.kind {
                    SchemaTypeKind::Entity => "«entity type»",
                    SchemaTypeKind::Relationship => "«relationship type»",
                }
                .to_string(),
            ),
        })
        .collect();
    if let Some(message) = &result.message {
        nodes.push(RenderNode {
            id: "m0".to_string(),
            kind: NodeKind::Message,
            title: message.clone(),
            lines: vec![],
            color: COLOR_PLAIN.to_string(),
            stereotype: None,
        });
    }

    let mut edges = Vec::new();
    for a in &result.aggregations {
        edges.push(RenderEdge {
            from: ids[&a.from].clone(),
            to: ids[&a.to].clone(),
            style: EdgeStyle::Aggregation,
            label: edge_label(result, &a.from, &a.feature, a.cardinality),
            continues: false,
        });
    }
    let mut junctions = 0;
    for r in &result.references {
        let label = edge_label(result, &r.from, &r.feature, r.cardinality);
        let featuring: Vec<&NodeKey> = result
            .featuring
            .iter()
            .filter(|f| f.from == r.from && f.feature == r.feature)
            .map(|f| &f.to)
            .collect();
        if featuring.is_empty() {
            edges.push(RenderEdge {
                from: ids[&r.from].clone(),
                to: ids[&r.to].clone(),
                style: EdgeStyle::Reference,
                label,
                continues: false,
            });
            continue;
        }
        let j = format!("j{junctions}");
        junctions += 1;
        nodes.push(RenderNode {
            id: j.clone(),
            kind: NodeKind::Junction,
            title: String::new(),
            lines: vec![],
            color: COLOR_PLAIN.to_string(),
            stereotype: None,
        });
        edges.push(RenderEdge {
            from: ids[&r.from].clone(),
            to: j.clone(),
            style: EdgeStyle::Reference,
            label,
            continues: true,
        });
        edges.push(RenderEdge {
            from: j.clone(),
            to: ids[&r.to].clone(),
            style: EdgeStyle::Reference,
            label: String::new(),
            continues: false,
        });
        for to in featuring {
            edges.push(RenderEdge {
                from: j.clone(),
                to: ids[to].clone(),
                style: EdgeStyle::Featuring,
                label: String::new(),
                continues: false,
            });
        }
    }
    RenderGraph {
        format_version: GRAPH_JSON_VERSION,
        nodes,
        edges,
    }
}

/// Pretty-printed graph-JSON document with a trailing newline.
pub fn to_graph_json(result: &QueryResult) -> String {
    let mut s = serde_json::to_string_pretty(&to_render_graph(result))
        .expect("render graphs always serialize");
    s.push('\n');
    s
}

/// Output formats shared by the command line and the HTTP service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Dot,
    #[serde(rename = "graphjson")]
    GraphJson,
}

impl Format {
    pub fn media_type(self) -> &'static str {
        match self {
            Format::Table => "text/plain; charset=utf-8",
            Format::Dot => "text/vnd.graphviz; charset=utf-8",
            Format::GraphJson => "application/json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "table" => Ok(Format::Table),
            "dot" => Ok(Format::Dot),
            "graphjson" | "json" => Ok(Format::GraphJson),
            other => Err(format!("unknown format `{other}`, expected table, dot or graphjson")),
        }
    }
}

pub fn render(result: &QueryResult, format: Format) -> String {
    match format {
        Format::Table => to_table(result).to_text(),
        Format::Dot => to_dot(result),
        Format::GraphJson => to_graph_json(result),
    }
}
