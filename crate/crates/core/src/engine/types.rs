use std::collections::BTreeSet;

use crate::model::{
    feature_classes, Feature, SchemaType, StructuralVariation, USchemaModel,
};
use crate::syntax::{unparse, Interval, NameSpec, Operation, Query, TypeQuery, TypeTarget};

use super::result::Builder;
use super::{match_name, match_variation, EngineError, NodeKey, QueryResult};

/// Entity types matching `name`, and relationship types that either match
/// `name` or describe a reference to an entity type matching it.
pub(crate) fn selected_types<'m>(
    model: &'m USchemaModel,
    target: TypeTarget,
    name: &NameSpec,
) -> Vec<&'m dyn SchemaType> {
    let mut out: Vec<&dyn SchemaType> = Vec::new();
    if target != TypeTarget::Rel {
        out.extend(
            model
                .entity_types
                .iter()
                .filter(|e| match_name(name, &e.name))
                .map(|e| e as &dyn SchemaType),
        );
    }
    if target != TypeTarget::Entity {
        let mut featuring: BTreeSet<&str> = BTreeSet::new();
        for e in &model.entity_types {
            for v in &e.variations {
                for f in &v.features {
                    if let Feature::Reference(r) = f {
                        if match_name(name, &r.target) {
                            featuring.extend(r.featured_by.iter().map(|fb| fb.relationship_type.as_str()));
                        }
                    }
                }
            }
        }
        out.extend(
            model
                .relationship_types
                .iter()
                .filter(|r| match_name(name, &r.name) || featuring.contains(r.name.as_str()))
                .map(|r| r as &dyn SchemaType),
        );
    }
    out
}

fn keys_only(v: &StructuralVariation) -> Option<StructuralVariation> {
    let key_attrs: BTreeSet<&str> = v
        .keys()
        .flat_map(|k| k.attribute_names.iter().map(String::as_str))
        .collect();
    v.keys().next()?;
    let mut out = v.clone();
    out.features.retain(|f| match f {
        Feature::Key(_) => true,
        Feature::Attribute(a) => key_attrs.contains(a.name.as_str()),
        _ => false,
    });
    Some(out)
}

pub(crate) fn run(model: &USchemaModel, q: &TypeQuery) -> Result<QueryResult, EngineError> {
    let mut selected: Vec<(&dyn SchemaType, Vec<StructuralVariation>)> = Vec::new();
    for ty in selected_types(model, q.target, &q.name) {
        let classes = feature_classes(ty);
        let vs: Vec<StructuralVariation> = ty
            .variations()
            .iter()
            .filter(|v| match_variation(q.filter.as_ref(), v, &classes))
            .cloned()
            .collect();
        if !vs.is_empty() {
            selected.push((ty, vs));
        }
    }

    let query_text = unparse(&Query::Type(q.clone()));
    let mut message = format!("no schema type matches `{query_text}`");
    let mut timeline = false;
    for op in &q.operations {
        if selected.is_empty() {
            break;
        }
        match op {
            Operation::Keys => {
                for (_, vs) in &mut selected {
                    *vs = vs.iter().filter_map(keys_only).collect();
                }
                message = "no selected variation has a key".to_string();
            }
            Operation::History(interval) => {
                let dated = selected
                    .iter()
                    .flat_map(|(_, vs)| vs)
                    .any(|v| v.first_seen.is_some());
                if !dated {
                    let names: Vec<&str> = selected.iter().map(|(t, _)| t.name()).collect();
                    return Err(EngineError::HistoryUnavailable(names.join(", ")));
                }
                for (_, vs) in &mut selected {
                    vs.retain(|v| v.first_seen.is_some_and(|d| interval.contains(d)));
                }
                message = match interval {
                    Interval::Before(d) => format!("no selected variation was first seen before {d}"),
                    Interval::After(d) => format!("no selected variation was first seen after {d}"),
                    Interval::Between(a, b) => {
                        format!("no selected variation was first seen between {a} and {b}")
                    }
                };
                timeline = true;
            }
        }
        selected.retain(|(_, vs)| !vs.is_empty());
    }

    let mut b = Builder::default();
    for (ty, vs) in selected {
        for v in vs {
            let key = NodeKey::variation(ty.type_kind(), ty.name(), v.id);
            b.add_node(key, Some(v));
        }
    }
    if q.union {
        b = b.unionize(model)?;
        timeline = false;
    }
    Ok(b.finish(model, Some(message), timeline))
}
