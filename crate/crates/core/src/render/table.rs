use serde::Serialize;

use super::{feature_lines, source_prefix};
use crate::engine::{NodeKey, NodeSlot, QueryResult};
use crate::model::{Cardinality, SchemaTypeKind};

/// Variations of one schema type, one row per feature line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableSection {
    pub title: String,
    pub rows: Vec<[String; 3]>,
}

/// Text listing of a result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResultTable {
    pub sections: Vec<TableSection>,
    /// source, feature, cardinality, kind, target
    pub relationships: Vec<[String; 5]>,
    /// source, feature, relationship variation
    pub featuring: Vec<[String; 3]>,
    pub message: Option<String>,
}

pub fn to_table(result: &QueryResult) -> ResultTable {
    let mut sections: Vec<TableSection> = Vec::new();
    let mut titles: Vec<(SchemaTypeKind, &str)> = Vec::new();
    for n in &result.nodes {
        let id = (n.key.kind, n.key.type_name.as_str());
        let idx = match titles.iter().position(|t| *t == id) {
            Some(i) => i,
            None => {
                titles.push(id);
                let mut title = format!(
                    "{} {}",
                    n.key.type_name,
                    match n.key.kind {
                        SchemaTypeKind::Entity => "«entity type»",
                        SchemaTypeKind::Relationship => "«relationship type»",
                    }
                );
                if n.root {
                    title.push_str(", root");
                }
                sections.push(TableSection {
                    title,
                    rows: vec![],
                });
                sections.len() - 1
            }
        };
        let (variation, instances) = match (n.key.slot, &n.variation) {
            (NodeSlot::Type, _) => ("type".to_string(), "-".to_string()),
            (NodeSlot::Union, v) => (
                "union".to_string(),
                v.as_ref().map_or("-".to_string(), |v| v.instance_count.to_string()),
            ),
            (NodeSlot::Variation(id), v) => (
                id.to_string(),
                v.as_ref().map_or("-".to_string(), |v| v.instance_count.to_string()),
            ),
        };
        let lines = feature_lines(n, result.timeline);
        let rows = &mut sections[idx].rows;
        if lines.is_empty() {
            rows.push([variation.clone(), instances.clone(), String::new()]);
        }
        for (i, line) in lines.into_iter().enumerate() {
            if i == 0 {
                rows.push([variation.clone(), instances.clone(), line]);
            } else {
                rows.push([String::new(), String::new(), line]);
            }
        }
    }

    let mut relationships = Vec::new();
    for a in &result.aggregations {
        relationships.push(edge_row(result, &a.from, &a.feature, a.cardinality, "AGGR", &a.to));
    }
    for r in &result.references {
        relationships.push(edge_row(result, &r.from, &r.feature, r.cardinality, "REF", &r.to));
    }
    relationships.sort();
    let featuring = result
        .featuring
        .iter()
        .map(|f| [f.from.to_string(), f.feature.clone(), f.to.to_string()])
        .collect();

    ResultTable {
        sections,
        relationships,
        featuring,
        message: result.message.clone(),
    }
}

fn edge_row(
    result: &QueryResult,
    from: &NodeKey,
    feature: &str,
    card: Cardinality,
    kind: &str,
    to: &NodeKey,
) -> [String; 5] {
    let prefix = source_prefix(result, from, feature);
    [
        from.to_string(),
        format!("{prefix}{feature}").trim_start().to_string(),
        card.to_string(),
        kind.to_string(),
        to.to_string(),
    ]
}

fn write_rows<const N: usize>(out: &mut String, header: [&str; N], rows: &[[String; N]]) {
    let mut widths = header.map(|h| h.chars().count());
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut line = |cells: Vec<&str>| {
        let mut s = String::from("  ");
        for (i, cell) in cells.iter().enumerate() {
            s.push_str(cell);
            if i + 1 < N {
                s.push_str(&" ".repeat(widths[i] - cell.chars().count() + 2));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for row in rows {
        line(row.iter().map(String::as_str).collect());
    }
}

impl ResultTable {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(m) = &self.message {
            out.push_str(m);
            out.push('\n');
            return out;
        }
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&s.title);
            out.push('\n');
            write_rows(&mut out, ["variation", "instances", "features"], &s.rows);
        }
        if !self.relationships.is_empty() {
            out.push_str("\nrelationships\n");
            write_rows(
                &mut out,
                ["from", "feature", "cardinality", "kind", "to"],
                &self.relationships,
            );
        }
        if !self.featuring.is_empty() {
            out.push_str("\nfeatured by\n");
            write_rows(&mut out, ["from", "feature", "relationship"], &self.featuring);
        }
        out
    }
}
