use std::fmt::Write;

use super::ast::*;
use crate::model::FeatureClass;

/// Canonical single-line text of a query. Parsing the result gives back an
/// equal query.
pub fn unparse(query: &Query) -> String {
    let mut out = String::new();
    if query.is_union() {
        out.push_str("UNION ");
    }
    match query {
        Query::Type(q) => type_query(&mut out, q),
        Query::Rel(q) => rel_query(&mut out, q),
    }
    out
}

pub fn unparse_name_spec(spec: &NameSpec) -> String {
    match spec {
        NameSpec::Exact(s) => s.clone(),
        NameSpec::Prefix(s) => format!("{s}*"),
        NameSpec::Suffix(s) => format!("*{s}"),
        NameSpec::Contains(s) => format!("*{s}*"),
        NameSpec::All => "*".to_string(),
        NameSpec::Regex(p) => format!("r\"{}\"", p.replace('"', "\\\"")),
    }
}

fn type_query(out: &mut String, q: &TypeQuery) {
    out.push_str(match q.target {
        TypeTarget::Entity => "ENTITY ",
        TypeTarget::Rel => "REL ",
        TypeTarget::Any => "ANY ",
    });
    out.push_str(&unparse_name_spec(&q.name));
    if let Some(f) = &q.filter {
        out.push(' ');
        filter(out, f);
    }
    for (i, op) in q.operations.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        match op {
            Operation::Keys => out.push_str("keys"),
            Operation::History(Interval::Before(d)) => {
                let _ = write!(out, "history before {d}");
            }
            Operation::History(Interval::After(d)) => {
                let _ = write!(out, "history after {d}");
            }
            Operation::History(Interval::Between(a, b)) => {
                let _ = write!(out, "history between ({a}, {b})");
            }
        }
    }
}

fn rel_query(out: &mut String, q: &RelQuery) {
    out.push_str("FROM ");
    match &q.from {
        FromClause::Empty => out.push('_'),
        FromClause::Type { name, filter: f } => {
            out.push_str(&unparse_name_spec(name));
            if let Some(f) = f {
                out.push(' ');
                filter(out, f);
            }
        }
    }
    out.push_str(" TO ");
    for (i, spec) in q.to.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match spec {
            RelSpec::NoTarget => out.push('_'),
            RelSpec::Target(t) => target(out, t),
        }
    }
}

fn target(out: &mut String, t: &TargetSpec) {
    if t.indirect {
        out.push_str(">> ");
    }
    out.push_str(&unparse_name_spec(&t.name));
    if let Some(f) = &t.target_filter {
        out.push(' ');
        filter(out, f);
    }
    if let Some(kind) = t.kind {
        out.push_str(match kind {
            RelKind::Ref => " REF",
            RelKind::Aggr => " AGGR",
            RelKind::Any => " ANY",
        });
        if let Some(name) = &t.feature {
            out.push(' ');
            out.push_str(name);
        }
        if let Some(f) = &t.ref_filter {
            out.push(' ');
            filter(out, f);
        }
    }
}

fn filter(out: &mut String, f: &VariationFilter) {
    out.push('[');
    for (i, spec) in f.features.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        match spec.class {
            Some(FeatureClass::Shared) => out.push_str("shared "),
            Some(FeatureClass::NonShared) => out.push_str("non-shared "),
            Some(FeatureClass::Specific) => out.push_str("specific "),
            None => {}
        }
        out.push_str(&spec.name);
        if let Some(ts) = &spec.type_spec {
            out.push_str(": ");
            feature_type(out, ts);
        }
    }
    out.push(']');
}

fn feature_type(out: &mut String, ts: &FeatureTypeSpec) {
    match ts {
        FeatureTypeSpec::Attribute(a) => attribute_type(out, a),
        FeatureTypeSpec::Aggr(t) => {
            out.push_str("AGGR");
            if let Some(t) = t {
                let _ = write!(out, "<{t}>");
            }
        }
        FeatureTypeSpec::Ref(t) => {
            out.push_str("REF");
            if let Some(t) = t {
                let _ = write!(out, "<{t}>");
            }
        }
        FeatureTypeSpec::Unknown => out.push('?'),
    }
}

fn basic_type(out: &mut String, b: BasicTypeSpec) {
    out.push_str(match (b.ty, b.capitalized) {
        (BasicType::Number, false) => "number",
        (BasicType::Number, true) => "Number",
        (BasicType::String, false) => "string",
        (BasicType::String, true) => "String",
        (BasicType::Boolean, false) => "boolean",
        (BasicType::Boolean, true) => "Boolean",
    });
}

fn attribute_type(out: &mut String, a: &AttributeTypeSpec) {
    match a {
        AttributeTypeSpec::Basic(b) => basic_type(out, *b),
        AttributeTypeSpec::Array(inner) => {
            attribute_type(out, inner);
            out.push_str("[]");
        }
        AttributeTypeSpec::Set(inner) => {
            out.push_str("Set<");
            attribute_type(out, inner);
            out.push('>');
        }
        AttributeTypeSpec::List(inner) => {
            out.push_str("List<");
            attribute_type(out, inner);
            out.push('>');
        }
        AttributeTypeSpec::Tuple(items) => {
            out.push_str("Tuple<");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                attribute_type(out, item);
            }
            out.push('>');
        }
        AttributeTypeSpec::Map(k, v) => {
            out.push_str("Map<");
            basic_type(out, *k);
            out.push_str(", ");
            attribute_type(out, v);
            out.push('>');
        }
    }
}
