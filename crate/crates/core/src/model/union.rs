use std::collections::BTreeMap;

use super::{
    EntityType, Feature, FeaturingRef, ModelError, RelationshipType, SchemaType,
    StructuralVariation, USchemaModel,
};

/// Gathers the given variations of one type into a single variation with
/// id 1. Attribute type collisions become union types, references and
/// aggregates merge their targets and widen their cardinality.
pub fn fold_variations<'a, I>(type_name: &str, variations: I) -> Result<StructuralVariation, ModelError>
where
    I: IntoIterator<Item = &'a StructuralVariation>,
{
    let mut features: BTreeMap<(String, u8), Feature> = BTreeMap::new();
    let mut instance_count = 0;
    let mut first_seen = None;
    let mut last_seen = None;
    let mut seen_any = false;

    for v in variations {
        seen_any = true;
        instance_count += v.instance_count;
        first_seen = min_date(first_seen, v.first_seen);
        last_seen = max_date(last_seen, v.last_seen);
        for f in &v.features {
            let key = (f.name().to_string(), f.namespace());
            match features.remove(&key) {
                None => {
                    features.insert(key, f.clone());
                }
                Some(existing) => {
                    let merged = merge(type_name, existing, f)?;
                    features.insert(key, merged);
                }
            }
        }
    }
    if !seen_any {
        return Err(ModelError::NoVariations(type_name.to_string()));
    }

    let mut out = StructuralVariation::new(1, features.into_values().collect());
    out.instance_count = instance_count;
    out.first_seen = first_seen;
    out.last_seen = last_seen;
    Ok(out)
}

fn min_date<T: Ord>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn max_date<T: Ord>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

fn merge(type_name: &str, existing: Feature, next: &Feature) -> Result<Feature, ModelError> {
    let conflict = |a: &Feature, b: &Feature| ModelError::KindConflict {
        type_name: type_name.to_string(),
        feature: a.name().to_string(),
        first: a.kind(),
        second: b.kind(),
    };
    let target_conflict = |name: &str, a: &str, b: &str| ModelError::TargetConflict {
        type_name: type_name.to_string(),
        feature: name.to_string(),
        first: a.to_string(),
        second: b.to_string(),
    };
    Ok(match (existing, next) {
        (Feature::Attribute(mut a), Feature::Attribute(b)) => {
            a.data_type = a.data_type.unify(b.data_type.clone());
            Feature::Attribute(a)
        }
        (Feature::Key(mut a), Feature::Key(b)) => {
            a.attribute_names.extend(b.attribute_names.iter().cloned());
            a.attribute_names.sort();
            a.attribute_names.dedup();
            Feature::Key(a)
        }
        (Feature::Reference(mut a), Feature::Reference(b)) => {
            if a.target != b.target {
                return Err(target_conflict(&a.name, &a.target, &b.target));
            }
            a.cardinality = a.cardinality.widen(b.cardinality);
            a.featured_by.extend(b.featured_by.iter().cloned());
            a.featured_by.sort();
            a.featured_by.dedup();
            Feature::Reference(a)
        }
        (Feature::Aggregate(mut a), Feature::Aggregate(b)) => {
            if a.target != b.target {
                return Err(target_conflict(&a.name, &a.target, &b.target));
            }
            a.cardinality = a.cardinality.widen(b.cardinality);
            a.target_variation_ids.extend(b.target_variation_ids.iter().copied());
            a.target_variation_ids.sort_unstable();
            a.target_variation_ids.dedup();
            Feature::Aggregate(a)
        }
        (a, b) => return Err(conflict(&a, b)),
    })
}

/// Union type of a schema type: all its variations folded into one.
pub fn union_type<T: SchemaType + ?Sized>(ty: &T) -> Result<StructuralVariation, ModelError> {
    fold_variations(ty.name(), ty.variations())
}

/// Rewrites variation ids inside relationship features to 1, the id every
/// type carries once it has been replaced by its union type.
pub(crate) fn point_at_union_types(v: &mut StructuralVariation) {
    for f in &mut v.features {
        match f {
            Feature::Aggregate(a) => a.target_variation_ids = vec![1],
            Feature::Reference(r) => {
                for fb in &mut r.featured_by {
                    fb.variation = 1;
                }
                r.featured_by.dedup_by(|a: &mut FeaturingRef, b| a == b);
            }
            Feature::Attribute(_) | Feature::Key(_) => {}
        }
    }
    v.canonicalize();
}

/// Complete (`with_relationships`) or simple schema of union types.
pub fn union_schema(
    model: &USchemaModel,
    with_relationships: bool,
) -> Result<USchemaModel, ModelError> {
    let fold = |ty: &dyn SchemaType| -> Result<StructuralVariation, ModelError> {
        let mut v = union_type(ty)?;
        if with_relationships {
            point_at_union_types(&mut v);
        } else {
            v.features.retain(|f| !f.is_relationship());
        }
        Ok(v)
    };
    let entity_types = model
        .entity_types
        .iter()
        .map(|e| Ok(EntityType::new(e.name.clone(), e.root, vec![fold(e)?])))
        .collect::<Result<Vec<_>, ModelError>>()?;
    let relationship_types = model
        .relationship_types
        .iter()
        .map(|r| Ok(RelationshipType::new(r.name.clone(), vec![fold(r)?])))
        .collect::<Result<Vec<_>, ModelError>>()?;
    Ok(USchemaModel::new(
        model.name.clone(),
        model.kind,
        entity_types,
        relationship_types,
    ))
}
