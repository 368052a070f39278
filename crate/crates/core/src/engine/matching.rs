use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use regex::Regex;

use crate::model::{DataType, Feature, FeatureClass, StructuralVariation};
use crate::syntax::{
    AttributeTypeSpec, BasicType, BasicTypeSpec, FeatureSpec, FeatureTypeSpec, NameSpec,
    VariationFilter,
};

/// Compiles a name pattern so that it must match the whole name.
pub fn compile_name_regex(pattern: &str) -> Result<Regex, regex::Error> {
    Regex::new(&format!("^(?:{pattern})$"))
}

thread_local! {
    static COMPILED: RefCell<HashMap<String, Option<Regex>>> = RefCell::new(HashMap::new());
}

fn regex_matches(pattern: &str, name: &str) -> bool {
    COMPILED.with(|cache| {
        let mut cache = cache.borrow_mut();
        if cache.len() > 256 {
            cache.clear();
        }
        cache
            .entry(pattern.to_string())
            .or_insert_with(|| compile_name_regex(pattern).ok())
            .as_ref()
            .is_some_and(|re| re.is_match(name))
    })
}

/// Schema type names match case-sensitively.
pub fn match_name(spec: &NameSpec, name: &str) -> bool {
    match spec {
        NameSpec::Exact(s) => name == s,
        NameSpec::Prefix(s) => name.starts_with(s.as_str()),
        NameSpec::Suffix(s) => name.ends_with(s.as_str()),
        NameSpec::Contains(s) => name.contains(s.as_str()),
        NameSpec::All => true,
        NameSpec::Regex(p) => regex_matches(p, name),
    }
}

/// Whether `feature` satisfies one filter entry. `classes` holds the
/// feature classes of the variation's type. Feature names compare
/// ignoring ASCII case.
pub fn match_feature(
    spec: &FeatureSpec,
    feature: &Feature,
    classes: &BTreeMap<String, FeatureClass>,
) -> bool {
    if !feature.name().eq_ignore_ascii_case(&spec.name) {
        return false;
    }
    if let Some(required) = spec.class {
        match classes.get(feature.name()) {
            Some(c) if c.satisfies(required) => {}
            _ => return false,
        }
    }
    match (&spec.type_spec, feature) {
        (None, _) => true,
        (Some(FeatureTypeSpec::Attribute(t)), Feature::Attribute(a)) => {
            attribute_type_matches(t, &a.data_type)
        }
        (Some(FeatureTypeSpec::Unknown), Feature::Attribute(a)) => a.data_type == DataType::Unknown,
        (Some(FeatureTypeSpec::Aggr(target)), Feature::Aggregate(a)) => {
            target.as_ref().is_none_or(|t| *t == a.target)
        }
        (Some(FeatureTypeSpec::Ref(target)), Feature::Reference(r)) => {
            target.as_ref().is_none_or(|t| *t == r.target)
        }
        _ => false,
    }
}

/// Every filter entry is satisfied by some feature of `v`.
pub fn match_variation(
    filter: Option<&VariationFilter>,
    v: &StructuralVariation,
    classes: &BTreeMap<String, FeatureClass>,
) -> bool {
    filter.is_none_or(|f| {
        f.features
            .iter()
            .all(|spec| v.features.iter().any(|feat| match_feature(spec, feat, classes)))
    })
}

fn basic_matches(b: BasicTypeSpec, t: &DataType) -> bool {
    matches!(
        (b.ty, t),
        (BasicType::Number, DataType::Number)
            | (BasicType::String, DataType::String)
            | (BasicType::Boolean, DataType::Boolean)
    )
}

/// A union type matches when one of its members does.
fn attribute_type_matches(spec: &AttributeTypeSpec, t: &DataType) -> bool {
    t.alternatives().iter().any(|alt| match (spec, alt) {
        (AttributeTypeSpec::Basic(b), t) => basic_matches(*b, t),
        (AttributeTypeSpec::Array(s), DataType::Array { element })
        | (AttributeTypeSpec::Set(s), DataType::Set { element })
        | (AttributeTypeSpec::List(s), DataType::List { element }) => {
            attribute_type_matches(s, element)
        }
        (AttributeTypeSpec::Tuple(items), DataType::Tuple { elements }) => {
            items.len() == elements.len()
                && items
                    .iter()
                    .zip(elements)
                    .all(|(s, e)| attribute_type_matches(s, e))
        }
        (AttributeTypeSpec::Map(k, v), DataType::Map { key, value }) => {
            basic_matches(*k, key) && attribute_type_matches(v, value)
        }
        _ => false,
    })
}
