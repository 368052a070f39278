//! Seeded random models, queries and syntax trees.

use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skiql::model::{
    Aggregate, Attribute, Cardinality, DataType, EntityType, Feature, FeatureClass, FeaturingRef,
    Key, Reference, RelationshipType, SchemaKind, StructuralVariation, USchemaModel,
};
use skiql::syntax::{
    AttributeTypeSpec, BasicType, BasicTypeSpec, FeatureSpec, FeatureTypeSpec, FromClause,
    Interval, NameSpec, Operation, Query, RelKind, RelQuery, RelSpec, TargetSpec, TypeQuery,
    TypeTarget, VariationFilter,
};

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const TYPE_NAMES: &[&str] = &[
    "User", "Movie", "Address", "UserNote", "Review", "MovieTag", "Actor", "Rating",
];
pub const FEATURE_NAMES: &[&str] = &[
    "id", "name", "title", "score", "tags", "owner", "items", "meta", "info", "code",
];
pub const REL_NAMES: &[&str] = &["likes", "knows", "rated", "owns"];
pub const REL_FEATURES: &[&str] = &["since", "stars", "weight"];

fn basic(rng: &mut Rng8) -> DataType {
    match rng.gen_range(0..3) {
        0 => DataType::Number,
        1 => DataType::String,
        _ => DataType::Boolean,
    }
}

pub fn data_type(rng: &mut Rng8, depth: u32) -> DataType {
    if depth == 0 {
        return basic(rng);
    }
    match rng.gen_range(0..10) {
        0..=4 => basic(rng),
        5 => DataType::array(data_type(rng, depth - 1)),
        6 => DataType::Set {
            element: Box::new(data_type(rng, depth - 1)),
        },
        7 => DataType::Map {
            key: Box::new(basic(rng)),
            value: Box::new(data_type(rng, depth - 1)),
        },
        8 => DataType::Tuple {
            elements: (0..rng.gen_range(1..=3)).map(|_| data_type(rng, depth - 1)).collect(),
        },
        _ => DataType::Unknown,
    }
}

fn cardinality(rng: &mut Rng8) -> Cardinality {
    Cardinality::new(rng.gen_range(0..2), rng.gen_bool(0.5))
}

fn date(rng: &mut Rng8) -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + chrono::Days::new(rng.gen_range(0..1200))
}

#[derive(Clone)]
enum Slot {
    Attr(Vec<DataType>),
    Ref(String, Vec<FeaturingRef>),
    Aggr(String),
}

/// A valid model with at most `max_types` entity types, `max_vars`
/// variations per type and `max_features` features per variation.
pub fn model_with(rng: &mut Rng8, max_types: usize, max_vars: usize, max_features: usize) -> USchemaModel {
    let graph = rng.gen_bool(0.4);
    let n = rng.gen_range(1..=max_types);
    let mut names: Vec<&str> = TYPE_NAMES.to_vec();
    names.shuffle(rng);
    names.truncate(n);
    let var_counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_vars)).collect();
    let mut roots: Vec<bool> = (0..n).map(|_| graph || rng.gen_bool(0.6)).collect();
    if !roots.iter().any(|r| *r) {
        roots[0] = true;
    }
    let dated = rng.gen_bool(0.5);

    let mut rel_types = Vec::new();
    if graph {
        let mut rn = REL_NAMES.to_vec();
        rn.shuffle(rng);
        for name in rn.into_iter().take(rng.gen_range(0..=3)) {
            let vars = (1..=rng.gen_range(1..=3u32))
                .map(|id| {
                    let mut fs: Vec<Feature> = Vec::new();
                    for f in REL_FEATURES {
                        if rng.gen_bool(0.5) {
                            fs.push(Feature::Attribute(Attribute {
                                name: f.to_string(),
                                data_type: basic(rng),
                            }));
                        }
                    }
                    fs.truncate(max_features);
                    let mut v = StructuralVariation::new(id, fs).with_count(rng.gen_range(1..50));
                    if dated {
                        let d = date(rng);
                        v.first_seen = Some(d);
                        v.last_seen = Some(d + chrono::Days::new(rng.gen_range(0..300)));
                    }
                    v
                })
                .collect();
            rel_types.push(RelationshipType::new(name, vars));
        }
    }
    let featuring_pool: Vec<FeaturingRef> = rel_types
        .iter()
        .flat_map(|r| {
            r.variations.iter().map(move |v| FeaturingRef {
                relationship_type: r.name.clone(),
                variation: v.id,
            })
        })
        .collect();

    let aggregated: Vec<usize> = (0..n).filter(|&i| !roots[i]).collect();
    let mut types = Vec::new();
    for i in 0..n {
        let mut catalog: Vec<(&str, Slot)> = Vec::new();
        let mut fnames = FEATURE_NAMES.to_vec();
        fnames.shuffle(rng);
        for fname in fnames.into_iter().take(rng.gen_range(1..=max_features.max(1))) {
            let roll = rng.gen_range(0..10);
            let slot = if roll < 5 || fname == "id" {
                let a = data_type(rng, 2);
                let b = if rng.gen_bool(0.3) { data_type(rng, 1) } else { a.clone() };
                Slot::Attr(vec![a, b])
            } else if roll < 8 || graph || aggregated.is_empty() {
                let target = names[rng.gen_range(0..n)].to_string();
                let fb: Vec<FeaturingRef> = featuring_pool
                    .iter()
                    .filter(|_| rng.gen_bool(0.4))
                    .cloned()
                    .collect();
                Slot::Ref(target, fb)
            } else {
                let t = aggregated[rng.gen_range(0..aggregated.len())];
                Slot::Aggr(names[t].to_string())
            };
            catalog.push((fname, slot));
        }
        let mut vars = Vec::new();
        for id in 1..=var_counts[i] as u32 {
            let mut fs = Vec::new();
            for (fname, slot) in &catalog {
                if !rng.gen_bool(0.6) {
                    continue;
                }
                fs.push(match slot {
                    Slot::Attr(options) => Feature::Attribute(Attribute {
                        name: fname.to_string(),
                        data_type: options.choose(rng).unwrap().clone(),
                    }),
                    Slot::Ref(target, fb) => Feature::Reference(Reference {
                        name: fname.to_string(),
                        target: target.clone(),
                        cardinality: cardinality(rng),
                        featured_by: fb.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect(),
                    }),
                    Slot::Aggr(target) => {
                        let t = names.iter().position(|n| n == target).unwrap();
                        let mut ids: Vec<u32> = (1..=var_counts[t] as u32)
                            .filter(|_| rng.gen_bool(0.5))
                            .collect();
                        if ids.is_empty() {
                            ids.push(rng.gen_range(1..=var_counts[t] as u32));
                        }
                        Feature::Aggregate(Aggregate {
                            name: fname.to_string(),
                            target: target.clone(),
                            target_variation_ids: ids,
                            cardinality: cardinality(rng),
                        })
                    }
                });
            }
            if fs.is_empty() {
                let fname = catalog
                    .iter()
                    .find(|(_, s)| matches!(s, Slot::Attr(_)))
                    .map_or("fallback", |(n, _)| *n);
                fs.push(Feature::Attribute(Attribute {
                    name: fname.to_string(),
                    data_type: DataType::String,
                }));
            }
            fs.truncate(max_features);
            let has_id = fs.iter().any(|f| matches!(f, Feature::Attribute(a) if a.name == "id"));
            if has_id && rng.gen_bool(0.6) && fs.len() < max_features {
                fs.push(Feature::Key(Key {
                    name: "id".into(),
                    attribute_names: vec!["id".into()],
                }));
            }
            let mut v = StructuralVariation::new(id, fs).with_count(rng.gen_range(1..100));
            if dated && rng.gen_bool(0.85) {
                let d = date(rng);
                v.first_seen = Some(d);
                v.last_seen = Some(d + chrono::Days::new(rng.gen_range(0..300)));
            }
            vars.push(v);
        }
        types.push(EntityType::new(names[i], roots[i], vars));
    }

    // Unreferenced aggregate types become roots.
    let targeted: Vec<String> = types
        .iter()
        .flat_map(|t| t.variations.iter())
        .flat_map(|v| v.features.iter())
        .filter_map(|f| match f {
            Feature::Aggregate(a) => Some(a.target.clone()),
            _ => None,
        })
        .collect();
    for t in &mut types {
        if !t.root && !targeted.contains(&t.name) {
            t.root = true;
        }
    }
    let kind = if graph { SchemaKind::Graph } else { SchemaKind::Aggregate };
    let m = USchemaModel::new(format!("generated-{n}"), kind, types, rel_types);
    let violations = skiql::model::validate(&m);
    assert!(violations.is_empty(), "generator produced invalid model: {violations:?}");
    m
}

pub fn model(rng: &mut Rng8) -> USchemaModel {
    model_with(rng, 6, 4, 8)
}

fn ident_case(rng: &mut Rng8, s: &str) -> String {
    if rng.gen_bool(0.2) {
        s.to_ascii_uppercase()
    } else {
        s.to_string()
    }
}

/// A name spec biased towards names present in `names`.
pub fn name_spec(rng: &mut Rng8, names: &[&str]) -> NameSpec {
    let name = if !names.is_empty() && rng.gen_bool(0.8) {
        names[rng.gen_range(0..names.len())]
    } else {
        TYPE_NAMES[rng.gen_range(0..TYPE_NAMES.len())]
    };
    let len = name.len();
    match rng.gen_range(0..12) {
        0..=4 => NameSpec::Exact(name.to_string()),
        5 => NameSpec::Prefix(name[..rng.gen_range(1..=len.min(3))].to_string()),
        6 => NameSpec::Suffix(name[len - rng.gen_range(1..=len.min(3))..].to_string()),
        7 => {
            let a = rng.gen_range(0..len);
            let b = rng.gen_range(a + 1..=len);
            NameSpec::Contains(name[a..b].to_string())
        }
        8 => NameSpec::All,
        _ => NameSpec::Regex(regex_for(rng, name, names)),
    }
}

/// A pattern in the supported dialect derived from `name`.
pub fn regex_for(rng: &mut Rng8, name: &str, names: &[&str]) -> String {
    match rng.gen_range(0..6) {
        0 => format!("{}.*", &name[..1]),
        1 => {
            let other = names.choose(rng).copied().unwrap_or("Movie");
            format!("({name}|{other})")
        }
        2 => "[A-M]\\w*".to_string(),
        3 => {
            let chars: Vec<char> = name.chars().collect();
            chars
                .iter()
                .map(|c| if rng.gen_bool(0.3) { ".".to_string() } else { c.to_string() })
                .collect()
        }
        4 => format!("{}\\w+{}?", &name[..1], &name[name.len() - 1..]),
        _ => format!("(\\w)*{}", &name[name.len() - 1..]),
    }
}

fn basic_spec(rng: &mut Rng8) -> BasicTypeSpec {
    BasicTypeSpec {
        ty: match rng.gen_range(0..3) {
            0 => BasicType::Number,
            1 => BasicType::String,
            _ => BasicType::Boolean,
        },
        capitalized: rng.gen_bool(0.5),
    }
}

pub fn attribute_type_spec(rng: &mut Rng8, depth: u32) -> AttributeTypeSpec {
    if depth == 0 {
        return AttributeTypeSpec::Basic(basic_spec(rng));
    }
    match rng.gen_range(0..8) {
        0..=2 => AttributeTypeSpec::Basic(basic_spec(rng)),
        3 => AttributeTypeSpec::Array(Box::new(attribute_type_spec(rng, depth - 1))),
        4 => AttributeTypeSpec::Set(Box::new(attribute_type_spec(rng, depth - 1))),
        5 => AttributeTypeSpec::List(Box::new(attribute_type_spec(rng, depth - 1))),
        6 => AttributeTypeSpec::Tuple(
            (0..rng.gen_range(1..=3))
                .map(|_| attribute_type_spec(rng, depth - 1))
                .collect(),
        ),
        _ => AttributeTypeSpec::Map(basic_spec(rng), Box::new(attribute_type_spec(rng, depth - 1))),
    }
}

/// Spec for the attribute type `t`, when it can be written.
fn spec_of(t: &DataType) -> Option<AttributeTypeSpec> {
    let b = |ty| BasicTypeSpec { ty, capitalized: false };
    Some(match t {
        DataType::Number => AttributeTypeSpec::Basic(b(BasicType::Number)),
        DataType::String => AttributeTypeSpec::Basic(b(BasicType::String)),
        DataType::Boolean => AttributeTypeSpec::Basic(b(BasicType::Boolean)),
        DataType::Array { element } => AttributeTypeSpec::Array(Box::new(spec_of(element)?)),
        DataType::Set { element } => AttributeTypeSpec::Set(Box::new(spec_of(element)?)),
        DataType::List { element } => AttributeTypeSpec::List(Box::new(spec_of(element)?)),
        DataType::Tuple { elements } => {
            AttributeTypeSpec::Tuple(elements.iter().map(spec_of).collect::<Option<_>>()?)
        }
        DataType::Map { key, value } => {
            let AttributeTypeSpec::Basic(k) = spec_of(key)? else { return None };
            AttributeTypeSpec::Map(k, Box::new(spec_of(value)?))
        }
        DataType::Union { members } => spec_of(&members[0])?,
        DataType::Unknown => return None,
    })
}

/// A filter over features, often copied from a feature of `model`.
pub fn filter(rng: &mut Rng8, model: &USchemaModel, pool: &[&str]) -> VariationFilter {
    let features: Vec<&Feature> = model
        .all_variations()
        .flat_map(|(_, v)| v.features.iter())
        .collect();
    let mut specs: Vec<FeatureSpec> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let (name, type_spec) = if !features.is_empty() && rng.gen_bool(0.7) {
            let f = features[rng.gen_range(0..features.len())];
            let ts = if rng.gen_bool(0.5) {
                None
            } else {
                match f {
                    Feature::Attribute(a) => Some(match spec_of(&a.data_type) {
                        Some(s) => FeatureTypeSpec::Attribute(s),
                        None => FeatureTypeSpec::Unknown,
                    }),
                    Feature::Reference(r) => Some(FeatureTypeSpec::Ref(
                        rng.gen_bool(0.5).then(|| r.target.clone()),
                    )),
                    Feature::Aggregate(a) => Some(FeatureTypeSpec::Aggr(
                        rng.gen_bool(0.5).then(|| a.target.clone()),
                    )),
                    Feature::Key(_) => None,
                }
            };
            (f.name().to_string(), ts)
        } else {
            let ts = match rng.gen_range(0..5) {
                0 => Some(FeatureTypeSpec::Attribute(attribute_type_spec(rng, 1))),
                1 => Some(FeatureTypeSpec::Ref(None)),
                2 => Some(FeatureTypeSpec::Aggr(None)),
                _ => None,
            };
            (pool[rng.gen_range(0..pool.len())].to_string(), ts)
        };
        if specs.iter().any(|s| s.name.eq_ignore_ascii_case(&name)) {
            continue;
        }
        let class = match rng.gen_range(0..8) {
            0 => Some(FeatureClass::Shared),
            1 => Some(FeatureClass::NonShared),
            2 => Some(FeatureClass::Specific),
            _ => None,
        };
        specs.push(FeatureSpec {
            class,
            name: ident_case(rng, &name),
            type_spec,
        });
    }
    VariationFilter { features: specs }
}

fn interval(rng: &mut Rng8) -> Interval {
    let a = date(rng);
    match rng.gen_range(0..3) {
        0 => Interval::Before(a),
        1 => Interval::After(a),
        _ => Interval::Between(a, a + chrono::Days::new(rng.gen_range(0..600))),
    }
}

pub fn type_query(rng: &mut Rng8, model: &USchemaModel) -> TypeQuery {
    let target = match rng.gen_range(0..4) {
        0 | 1 => TypeTarget::Entity,
        2 => TypeTarget::Rel,
        _ => TypeTarget::Any,
    };
    let names: Vec<&str> = match target {
        TypeTarget::Rel => model
            .relationship_types
            .iter()
            .map(|r| r.name.as_str())
            .chain(model.entity_types.iter().map(|e| e.name.as_str()))
            .collect(),
        _ => model.entity_types.iter().map(|e| e.name.as_str()).collect(),
    };
    let mut operations = Vec::new();
    if rng.gen_bool(0.15) {
        operations.push(Operation::Keys);
    }
    if rng.gen_bool(0.15) {
        operations.push(Operation::History(interval(rng)));
    }
    if rng.gen_bool(0.5) {
        operations.reverse();
    }
    TypeQuery {
        union: rng.gen_bool(0.2),
        target,
        name: name_spec(rng, &names),
        filter: rng.gen_bool(0.5).then(|| filter(rng, model, FEATURE_NAMES)),
        operations,
    }
}

pub fn rel_query(rng: &mut Rng8, model: &USchemaModel) -> RelQuery {
    let names: Vec<&str> = model.entity_types.iter().map(|e| e.name.as_str()).collect();
    let from = if rng.gen_bool(0.1) {
        FromClause::Empty
    } else {
        FromClause::Type {
            name: name_spec(rng, &names),
            filter: rng.gen_bool(0.3).then(|| filter(rng, model, FEATURE_NAMES)),
        }
    };
    let to = (0..rng.gen_range(1..=2))
        .map(|_| {
            if rng.gen_bool(0.1) {
                return RelSpec::NoTarget;
            }
            let kind = match rng.gen_range(0..5) {
                0 => Some(RelKind::Ref),
                1 => Some(RelKind::Aggr),
                2 => Some(RelKind::Any),
                _ => None,
            };
            let feature = if kind.is_some() && rng.gen_bool(0.25) {
                let f = FEATURE_NAMES[rng.gen_range(0..FEATURE_NAMES.len())];
                Some(ident_case(rng, f))
            } else {
                None
            };
            RelSpec::Target(TargetSpec {
                indirect: rng.gen_bool(0.35),
                name: name_spec(rng, &names),
                target_filter: rng.gen_bool(0.2).then(|| filter(rng, model, FEATURE_NAMES)),
                kind,
                feature,
                ref_filter: (kind == Some(RelKind::Ref) && rng.gen_bool(0.4))
                    .then(|| filter(rng, model, REL_FEATURES)),
            })
        })
        .collect();
    RelQuery {
        union: rng.gen_bool(0.15),
        from,
        to,
    }
}

pub fn query(rng: &mut Rng8, model: &USchemaModel) -> Query {
    if rng.gen_bool(0.4) {
        Query::Type(type_query(rng, model))
    } else {
        Query::Rel(rel_query(rng, model))
    }
}

const KEYWORDS: &[&str] = &[
    "ENTITY", "REL", "ANY", "UNION", "FROM", "TO", "REF", "AGGR", "shared", "specific", "keys",
    "history", "before", "after", "between",
];

/// Identifier that is not a keyword.
pub fn ident(rng: &mut Rng8) -> String {
    const FIRST: &[u8] = b"abcxyzABCXYZ_";
    const REST: &[u8] = b"abcdexyzABCXYZ0189_";
    loop {
        let mut s = String::new();
        s.push(FIRST[rng.gen_range(0..FIRST.len())] as char);
        for _ in 0..rng.gen_range(0..6) {
            s.push(REST[rng.gen_range(0..REST.len())] as char);
        }
        if s != "_" && !KEYWORDS.contains(&s.as_str()) && !s.starts_with("r\"") {
            return s;
        }
    }
}

fn any_name_spec(rng: &mut Rng8) -> NameSpec {
    match rng.gen_range(0..7) {
        0 => NameSpec::Exact(ident(rng)),
        1 => NameSpec::Prefix(ident(rng)),
        2 => NameSpec::Suffix(ident(rng)),
        3 => NameSpec::Contains(ident(rng)),
        4 => NameSpec::All,
        _ => {
            let a = ident(rng);
            let b = ident(rng);
            NameSpec::Regex(regex_for(rng, &a, &[b.as_str()]))
        }
    }
}

fn any_filter(rng: &mut Rng8) -> VariationFilter {
    let mut features: Vec<FeatureSpec> = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let name = ident(rng);
        if features.iter().any(|f| f.name.eq_ignore_ascii_case(&name)) {
            continue;
        }
        let type_spec = match rng.gen_range(0..6) {
            0 => None,
            1 => Some(FeatureTypeSpec::Unknown),
            2 => Some(FeatureTypeSpec::Aggr(rng.gen_bool(0.5).then(|| ident(rng)))),
            3 => Some(FeatureTypeSpec::Ref(rng.gen_bool(0.5).then(|| ident(rng)))),
            _ => Some(FeatureTypeSpec::Attribute(attribute_type_spec(rng, 3))),
        };
        let class = match rng.gen_range(0..5) {
            0 => Some(FeatureClass::Shared),
            1 => Some(FeatureClass::NonShared),
            2 => Some(FeatureClass::Specific),
            _ => None,
        };
        features.push(FeatureSpec {
            class,
            name,
            type_spec,
        });
    }
    VariationFilter { features }
}

/// Arbitrary well-formed syntax tree, independent of any model.
pub fn any_query(rng: &mut Rng8) -> Query {
    if rng.gen_bool(0.4) {
        let mut operations = Vec::new();
        if rng.gen_bool(0.3) {
            operations.push(Operation::Keys);
        }
        if rng.gen_bool(0.3) {
            operations.push(Operation::History(interval(rng)));
        }
        if rng.gen_bool(0.5) {
            operations.reverse();
        }
        Query::Type(TypeQuery {
            union: rng.gen_bool(0.3),
            target: [TypeTarget::Entity, TypeTarget::Rel, TypeTarget::Any][rng.gen_range(0..3)],
            name: any_name_spec(rng),
            filter: rng.gen_bool(0.5).then(|| any_filter(rng)),
            operations,
        })
    } else {
        let from = if rng.gen_bool(0.2) {
            FromClause::Empty
        } else {
            FromClause::Type {
                name: any_name_spec(rng),
                filter: rng.gen_bool(0.4).then(|| any_filter(rng)),
            }
        };
        let to = (0..rng.gen_range(1..=3))
            .map(|_| {
                if rng.gen_bool(0.15) {
                    return RelSpec::NoTarget;
                }
                let kind = [None, Some(RelKind::Ref), Some(RelKind::Aggr), Some(RelKind::Any)]
                    [rng.gen_range(0..4)];
                RelSpec::Target(TargetSpec {
                    indirect: rng.gen_bool(0.3),
                    name: any_name_spec(rng),
                    target_filter: rng.gen_bool(0.3).then(|| any_filter(rng)),
                    kind,
                    feature: if kind.is_some() && rng.gen_bool(0.5) { Some(ident(rng)) } else { None },
                    ref_filter: if kind == Some(RelKind::Ref) && rng.gen_bool(0.5) {
                        Some(any_filter(rng))
                    } else {
                        None
                    },
                })
            })
            .collect();
        Query::Rel(RelQuery {
            union: rng.gen_bool(0.3),
            from,
            to,
        })
    }
}
