use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use super::{DataType, Feature, SchemaKind, SchemaType, StructuralVariation, USchemaModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    DuplicateTypeName,
    RelationshipTypeOutsideGraph,
    EmptyVariations,
    VariationIdsNotDense,
    DuplicateFeatureName,
    InvalidTimestamps,
    EmptyKey,
    DanglingKeyAttribute,
    DanglingReference,
    FeaturedByOutsideGraph,
    DanglingFeaturedBy,
    DanglingAggregate,
    AggregateTargetNotAggregate,
    EmptyAggregateTargets,
    UnknownTargetVariation,
    AggregateInGraphSchema,
    AggregateInRelationshipType,
    AggregateTypeInGraphSchema,
    OrphanAggregateType,
    InvalidUnionType,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A broken model invariant, located by `type/variation/feature` path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub path: String,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.path, self.message)
    }
}

struct Checker<'m> {
    model: &'m USchemaModel,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn report(&mut self, path: impl Into<String>, rule: Rule, message: impl Into<String>) {
        self.out.push(Violation {
            path: path.into(),
            rule,
            message: message.into(),
        });
    }
}

/// Checks every model invariant. An empty list means the model is valid.
pub fn validate(model: &USchemaModel) -> Vec<Violation> {
    let mut c = Checker {
        model,
        out: Vec::new(),
    };

    duplicate_names(&mut c, model.entity_types.iter().map(|e| e.name.as_str()));
    duplicate_names(&mut c, model.relationship_types.iter().map(|r| r.name.as_str()));

    if model.kind != SchemaKind::Graph {
        for r in &model.relationship_types {
            c.report(
                r.name.clone(),
                Rule::RelationshipTypeOutsideGraph,
                format!("relationship types only exist in graph schemas, not {}", model.kind),
            );
        }
    }

    let has_relationships = model
        .all_variations()
        .any(|(_, v)| v.relationships().next().is_some());
    let aggregated: HashSet<&str> = model
        .all_variations()
        .flat_map(|(_, v)| v.features.iter())
        .filter_map(|f| match f {
            Feature::Aggregate(a) => Some(a.target.as_str()),
            _ => None,
        })
        .collect();

    for e in &model.entity_types {
        if !e.root {
            if model.kind == SchemaKind::Graph {
                c.report(
                    e.name.clone(),
                    Rule::AggregateTypeInGraphSchema,
                    "graph schemas have no aggregate entity types",
                );
            } else if has_relationships && !aggregated.contains(e.name.as_str()) {
                c.report(
                    e.name.clone(),
                    Rule::OrphanAggregateType,
                    "aggregate entity type is not the target of any aggregate",
                );
            }
        }
        check_type(&mut c, e, false);
    }
    for r in &model.relationship_types {
        check_type(&mut c, r, true);
    }
    c.out
}

fn duplicate_names<'a>(c: &mut Checker<'_>, names: impl Iterator<Item = &'a str>) {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            c.report(n, Rule::DuplicateTypeName, format!("type `{n}` is declared twice"));
        }
    }
}

fn check_type<T: SchemaType + ?Sized>(c: &mut Checker<'_>, ty: &T, is_relationship: bool) {
    let vs = ty.variations();
    if vs.is_empty() {
        c.report(ty.name(), Rule::EmptyVariations, "schema type has no variations");
        return;
    }
    let ids: BTreeSet<u32> = vs.iter().map(|v| v.id).collect();
    let expected: BTreeSet<u32> = (1..=vs.len() as u32).collect();
    if ids != expected {
        c.report(
            ty.name(),
            Rule::VariationIdsNotDense,
            format!("variation ids must be exactly 1..{}", vs.len()),
        );
    }
    for v in vs {
        check_variation(c, ty.name(), v, is_relationship);
    }
}

fn check_variation(c: &mut Checker<'_>, type_name: &str, v: &StructuralVariation, is_relationship: bool) {
    let vpath = format!("{type_name}/{}", v.id);
    if let (Some(first), Some(last)) = (v.first_seen, v.last_seen) {
        if first > last {
            c.report(
                vpath.clone(),
                Rule::InvalidTimestamps,
                format!("first seen {first} is after last seen {last}"),
            );
        }
    }

    let mut names = HashSet::new();
    for f in &v.features {
        if !names.insert((f.name(), f.namespace())) {
            c.report(
                format!("{vpath}/{}", f.name()),
                Rule::DuplicateFeatureName,
                "feature name occurs twice in one variation",
            );
        }
    }

    for f in &v.features {
        let path = format!("{vpath}/{}", f.name());
        match f {
            Feature::Attribute(a) => check_data_type(c, &path, &a.data_type),
            Feature::Key(k) => {
                if k.attribute_names.is_empty() {
                    c.report(path.clone(), Rule::EmptyKey, "key is formed by no attributes");
                }
                for an in &k.attribute_names {
                    let ok = v
                        .features
                        .iter()
                        .any(|f| matches!(f, Feature::Attribute(a) if &a.name == an));
                    if !ok {
                        c.report(
                            path.clone(),
                            Rule::DanglingKeyAttribute,
                            format!("key attribute `{an}` is not an attribute of this variation"),
                        );
                    }
                }
            }
            Feature::Reference(r) => check_reference(c, &path, r),
            Feature::Aggregate(a) => {
                if is_relationship {
                    c.report(
                        path,
                        Rule::AggregateInRelationshipType,
                        "relationship types cannot have aggregates",
                    );
                } else if c.model.kind == SchemaKind::Graph {
                    c.report(
                        path,
                        Rule::AggregateInGraphSchema,
                        "graph schemas do not support aggregation",
                    );
                } else {
                    check_aggregate(c, &path, a);
                }
            }
        }
    }
}

fn check_reference(c: &mut Checker<'_>, path: &str, r: &super::Reference) {
    if c.model.entity_type(&r.target).is_none() {
        c.report(
            path,
            Rule::DanglingReference,
            format!("reference target `{}` is not an entity type", r.target),
        );
    }
    if !r.featured_by.is_empty() && c.model.kind != SchemaKind::Graph {
        c.report(
            path,
            Rule::FeaturedByOutsideGraph,
            "only graph references are featured by relationship types",
        );
    }
    for fb in &r.featured_by {
        let found = c
            .model
            .relationship_type(&fb.relationship_type)
            .is_some_and(|rt| rt.variation(fb.variation).is_some());
        if !found {
            c.report(
                path,
                Rule::DanglingFeaturedBy,
                format!(
                    "featuring variation {}[{}] does not exist",
                    fb.relationship_type, fb.variation
                ),
            );
        }
    }
}

fn check_aggregate(c: &mut Checker<'_>, path: &str, a: &super::Aggregate) {
    let Some(target) = c.model.entity_type(&a.target) else {
        c.report(
            path,
            Rule::DanglingAggregate,
            format!("aggregate target `{}` is not an entity type", a.target),
        );
        return;
    };
    if target.root {
        c.report(
            path,
            Rule::AggregateTargetNotAggregate,
            format!("aggregate target `{}` is a root entity type", a.target),
        );
    }
    if a.target_variation_ids.is_empty() {
        c.report(path, Rule::EmptyAggregateTargets, "aggregate names no target variations");
    }
    for id in &a.target_variation_ids {
        if target.variation(*id).is_none() {
            c.report(
                path,
                Rule::UnknownTargetVariation,
                format!("`{}` has no variation {id}", a.target),
            );
        }
    }
}

fn check_data_type(c: &mut Checker<'_>, path: &str, t: &DataType) {
    match t {
        DataType::Union { members } => {
            let bad = members.len() < 2
                || members
                    .iter()
                    .any(|m| matches!(m, DataType::Union { .. } | DataType::Unknown));
            if bad {
                c.report(
                    path,
                    Rule::InvalidUnionType,
                    "unions need two or more members, none of them a union or unknown",
                );
            }
            for m in members {
                check_data_type(c, path, m);
            }
        }
        DataType::Array { element } | DataType::Set { element } | DataType::List { element } => {
            check_data_type(c, path, element)
        }
        DataType::Tuple { elements } => {
            for e in elements {
                check_data_type(c, path, e);
            }
        }
        DataType::Map { key, value } => {
            check_data_type(c, path, key);
            check_data_type(c, path, value);
        }
        DataType::Number | DataType::String | DataType::Boolean | DataType::Unknown => {}
    }
}
