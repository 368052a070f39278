use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::engine::match_name;
use crate::model::{
    Aggregate, Attribute, Cardinality, DataType, EntityType, Feature, Key, Reference,
    SchemaKind, StructuralVariation, USchemaModel,
};
use crate::syntax::{parse_name_spec, NameSpec};

/// Records of one collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DocumentSample {
    pub collection_name: String,
    pub records: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReferenceHeuristic {
    /// Field name spec, e.g. `movie_id` or `*_id`.
    pub pattern: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ExtractionConfig {
    pub model_name: String,
    pub id_field_name: String,
    pub reference_heuristics: Vec<ReferenceHeuristic>,
    pub timestamp_field: Option<String>,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            model_name: "extracted".to_string(),
            id_field_name: "_id".to_string(),
            reference_heuristics: Vec::new(),
            timestamp_field: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("no records to extract from{}", .0.as_ref().map(|c| format!(" in collection `{c}`")).unwrap_or_default())]
    EmptySample(Option<String>),
    #[error("record {index} of `{collection}` is not an object")]
    NotAnObject { collection: String, index: usize },
    #[error("field `{field}` of `{type_name}` mixes objects and scalar values in one array")]
    MixedArray { type_name: String, field: String },
    #[error("field `{field}` of `{type_name}` holds both objects and scalar values")]
    HeterogeneousField { type_name: String, field: String },
    #[error("`{0}` is both a collection and an embedded object type")]
    TypeNameCollision(String),
    #[error("invalid reference pattern `{pattern}`: {message}")]
    InvalidPattern { pattern: String, message: String },
    #[error("field `{field}` holds `{value}`, which is not a date")]
    InvalidTimestamp { field: String, value: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Json {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// Reads every `*.jsonl` file of a directory as one collection named after
/// the file stem. Files are read in name order.
pub fn read_samples_dir(dir: &Path) -> Result<Vec<DocumentSample>, ExtractError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ExtractError::Io { path, source }
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "jsonl"))
        .collect();
    files.sort();
    let mut samples = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path).map_err(io(&path))?;
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let value = serde_json::from_str(line).map_err(|e| ExtractError::Json {
                path: path.clone(),
                line: i + 1,
                message: e.to_string(),
            })?;
            records.push(value);
        }
        let collection_name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        samples.push(DocumentSample {
            collection_name,
            records,
        });
    }
    Ok(samples)
}

#[derive(Debug, Clone)]
enum FieldAcc {
    Attr(DataType),
    Ref { target: String, card: Cardinality },
    Aggr {
        target: String,
        card: Cardinality,
        children: BTreeSet<String>,
    },
}

#[derive(Debug, Default)]
struct Group {
    fields: BTreeMap<String, FieldAcc>,
    has_key: bool,
    count: u64,
    first: Option<NaiveDate>,
    last: Option<NaiveDate>,
}

#[derive(Debug)]
struct TypeAcc {
    root: bool,
    groups: BTreeMap<String, Group>,
}

struct Extractor<'c> {
    config: &'c ExtractionConfig,
    heuristics: Vec<(NameSpec, String)>,
    nullable: HashSet<(String, String)>,
    types: BTreeMap<String, TypeAcc>,
}

/// Infers a model from document samples. Each collection becomes a root
/// entity type; embedded objects become aggregate entity types named after
/// their field. Each distinct structural signature is one variation.
pub fn extract_schema(
    samples: &[DocumentSample],
    config: &ExtractionConfig,
) -> Result<USchemaModel, ExtractError> {
    if samples.is_empty() {
        return Err(ExtractError::EmptySample(None));
    }
    let heuristics = config
        .reference_heuristics
        .iter()
        .map(|h| {
            parse_name_spec(&h.pattern)
                .map(|spec| (spec, h.target.clone()))
                .map_err(|e| ExtractError::InvalidPattern {
                    pattern: h.pattern.clone(),
                    message: e.to_string(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut ex = Extractor {
        config,
        heuristics,
        nullable: HashSet::new(),
        types: BTreeMap::new(),
    };

    for s in samples {
        if s.records.is_empty() {
            return Err(ExtractError::EmptySample(Some(s.collection_name.clone())));
        }
        for (index, r) in s.records.iter().enumerate() {
            let obj = r.as_object().ok_or_else(|| ExtractError::NotAnObject {
                collection: s.collection_name.clone(),
                index,
            })?;
            ex.scan_nulls(&s.collection_name, obj);
        }
    }

    for s in samples {
        for r in &s.records {
            let obj = r.as_object().expect("checked while scanning");
            let ts = ex.timestamp(obj)?;
            ex.visit_object(&s.collection_name, true, obj, ts)?;
        }
    }
    Ok(ex.build())
}

fn aggregate_type_name(field: &str) -> String {
    let mut chars = field.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn scalar_type(v: &Value) -> Option<DataType> {
    Some(match v {
        Value::Null => DataType::Unknown,
        Value::Bool(_) => DataType::Boolean,
        Value::Number(_) => DataType::Number,
        Value::String(_) => DataType::String,
        Value::Array(items) => {
            let mut elem = DataType::Unknown;
            for i in items {
                elem = elem.unify(scalar_type(i)?);
            }
            DataType::array(elem)
        }
        Value::Object(_) => return None,
    })
}

impl Extractor<'_> {
    fn scan_nulls(&mut self, type_name: &str, obj: &Map<String, Value>) {
        for (k, v) in obj {
            match v {
                Value::Null => {
                    self.nullable.insert((type_name.to_string(), k.clone()));
                }
                Value::Object(child) => self.scan_nulls(&aggregate_type_name(k), child),
                Value::Array(items) => {
                    for i in items {
                        if let Value::Object(child) = i {
                            self.scan_nulls(&aggregate_type_name(k), child);
                        }
                    }
                }
                _ => {}
            }
        }
    }

    fn timestamp(&self, obj: &Map<String, Value>) -> Result<Option<NaiveDate>, ExtractError> {
        let Some(field) = &self.config.timestamp_field else {
            return Ok(None);
        };
        let Some(value) = obj.get(field) else {
            return Ok(None);
        };
        let invalid = || ExtractError::InvalidTimestamp {
            field: field.clone(),
            value: value.to_string(),
        };
        let s = value.as_str().ok_or_else(invalid)?;
        let date = s.get(..10).ok_or_else(invalid)?;
        NaiveDate::parse_from_str(date, "%Y-%m-%d")
            .map(Some)
            .map_err(|_| invalid())
    }

    fn reference_target(&self, field: &str) -> Option<&str> {
        self.heuristics
            .iter()
            .find(|(spec, _)| match_name(spec, field))
            .map(|(_, t)| t.as_str())
    }

    /// Records one object and returns its structural signature.
    fn visit_object(
        &mut self,
        type_name: &str,
        root: bool,
        obj: &Map<String, Value>,
        ts: Option<NaiveDate>,
    ) -> Result<String, ExtractError> {
        let mut sig_parts: Vec<(String, String)> = Vec::new();
        let mut fields = BTreeMap::new();
        let mut has_key = false;

        for (k, v) in obj {
            if root && self.config.timestamp_field.as_deref() == Some(k.as_str()) {
                continue;
            }
            if root && k == &self.config.id_field_name {
                has_key = true;
            }
            let (sig, acc) = self.field(type_name, k, v, ts)?;
            let sig = if self.nullable.contains(&(type_name.to_string(), k.clone())) {
                "?".to_string()
            } else {
                sig
            };
            sig_parts.push((k.clone(), sig));
            fields.insert(k.clone(), acc);
        }
        sig_parts.sort();
        let signature = serde_json::to_string(&sig_parts).expect("strings serialize");

        let ty = self
            .types
            .entry(type_name.to_string())
            .or_insert_with(|| TypeAcc {
                root,
                groups: BTreeMap::new(),
            });
        if ty.root != root {
            return Err(ExtractError::TypeNameCollision(type_name.to_string()));
        }
        let group = ty.groups.entry(signature.clone()).or_default();
        group.count += 1;
        group.has_key |= has_key;
        if let Some(ts) = ts {
            group.first = Some(group.first.map_or(ts, |f| f.min(ts)));
            group.last = Some(group.last.map_or(ts, |l| l.max(ts)));
        }
        for (k, acc) in fields {
            let merged = match group.fields.remove(&k) {
                None => acc,
                Some(prev) => merge_field(type_name, &k, prev, acc)?,
            };
            group.fields.insert(k, merged);
        }
        Ok(signature)
    }

    fn field(
        &mut self,
        type_name: &str,
        name: &str,
        value: &Value,
        ts: Option<NaiveDate>,
    ) -> Result<(String, FieldAcc), ExtractError> {
        match value {
            Value::Object(child) => {
                let target = aggregate_type_name(name);
                let child_sig = self.visit_object(&target, false, child, ts)?;
                Ok((
                    format!("AGGR<{target}>{child_sig}"),
                    FieldAcc::Aggr {
                        target,
                        card: Cardinality::One,
                        children: BTreeSet::from([child_sig]),
                    },
                ))
            }
            Value::Array(items) if items.iter().any(Value::is_object) => {
                if items.iter().any(|i| !i.is_object() && !i.is_null()) {
                    return Err(ExtractError::MixedArray {
                        type_name: type_name.to_string(),
                        field: name.to_string(),
                    });
                }
                let target = aggregate_type_name(name);
                let mut children = BTreeSet::new();
                for i in items {
                    if let Value::Object(child) = i {
                        children.insert(self.visit_object(&target, false, child, ts)?);
                    }
                }
                let joined: Vec<&str> = children.iter().map(String::as_str).collect();
                Ok((
                    format!("AGGR<{target}>[{}]", joined.join("|")),
                    FieldAcc::Aggr {
                        target,
                        card: Cardinality::ZeroOrMany,
                        children,
                    },
                ))
            }
            other => {
                let ty = scalar_type(other).ok_or_else(|| ExtractError::MixedArray {
                    type_name: type_name.to_string(),
                    field: name.to_string(),
                })?;
                if !other.is_null() {
                    if let Some(target) = self.reference_target(name) {
                        let many = other.is_array();
                        let card = if many {
                            Cardinality::ZeroOrMany
                        } else {
                            Cardinality::One
                        };
                        let sig = format!("REF<{target}>{}", if many { "[]" } else { "" });
                        return Ok((
                            sig,
                            FieldAcc::Ref {
                                target: target.to_string(),
                                card,
                            },
                        ));
                    }
                }
                Ok((ty.to_string(), FieldAcc::Attr(ty)))
            }
        }
    }

    fn build(self) -> USchemaModel {
        // Variation ids per type: first seen ascending, undated last, then
        // signature.
        let mut ids: HashMap<(&str, &str), u32> = HashMap::new();
        for (name, ty) in &self.types {
            let mut order: Vec<(&String, &Group)> = ty.groups.iter().collect();
            order.sort_by(|(sa, ga), (sb, gb)| {
                (ga.first.is_none(), ga.first, sa).cmp(&(gb.first.is_none(), gb.first, sb))
            });
            for (i, (sig, _)) in order.into_iter().enumerate() {
                ids.insert((name.as_str(), sig.as_str()), i as u32 + 1);
            }
        }

        let entity_types = self
            .types
            .iter()
            .map(|(name, ty)| {
                let variations = ty
                    .groups
                    .iter()
                    .map(|(sig, g)| {
                        let mut features: Vec<Feature> = g
                            .fields
                            .iter()
                            .map(|(fname, acc)| match acc {
                                FieldAcc::Attr(t) => Feature::Attribute(Attribute {
                                    name: fname.clone(),
                                    data_type: t.clone(),
                                }),
                                FieldAcc::Ref { target, card } => Feature::Reference(Reference {
                                    name: fname.clone(),
                                    target: target.clone(),
                                    cardinality: *card,
                                    featured_by: vec![],
                                }),
                                FieldAcc::Aggr {
                                    target,
                                    card,
                                    children,
                                } => Feature::Aggregate(Aggregate {
                                    name: fname.clone(),
                                    target: target.clone(),
                                    target_variation_ids: children
                                        .iter()
                                        .map(|c| ids[&(target.as_str(), c.as_str())])
                                        .collect(),
                                    cardinality: *card,
                                }),
                            })
                            .collect();
                        let id_field = &self.config.id_field_name;
                        if g.has_key
                            && matches!(g.fields.get(id_field), Some(FieldAcc::Attr(_)))
                        {
                            features.push(Feature::Key(Key {
                                name: id_field.clone(),
                                attribute_names: vec![id_field.clone()],
                            }));
                        }
                        let mut v =
                            StructuralVariation::new(ids[&(name.as_str(), sig.as_str())], features);
                        v.instance_count = g.count;
                        v.first_seen = g.first;
                        v.last_seen = g.last;
                        v
                    })
                    .collect();
                EntityType::new(name.clone(), ty.root, variations)
            })
            .collect();

        USchemaModel::new(
            self.config.model_name.clone(),
            SchemaKind::Aggregate,
            entity_types,
            vec![],
        )
    }
}

fn merge_field(
    type_name: &str,
    field: &str,
    a: FieldAcc,
    b: FieldAcc,
) -> Result<FieldAcc, ExtractError> {
    use FieldAcc::*;
    let hetero = || ExtractError::HeterogeneousField {
        type_name: type_name.to_string(),
        field: field.to_string(),
    };
    let nullable = |c: Cardinality| c.widen(Cardinality::ZeroOrOne);
    Ok(match (a, b) {
        (Attr(x), Attr(y)) => Attr(x.unify(y)),
        (Attr(DataType::Unknown), Ref { target, card })
        | (Ref { target, card }, Attr(DataType::Unknown)) => Ref {
            target,
            card: nullable(card),
        },
        (Attr(DataType::Unknown), Aggr { target, card, children })
        | (Aggr { target, card, children }, Attr(DataType::Unknown)) => Aggr {
            target,
            card: nullable(card),
            children,
        },
        (Ref { target, card: c1 }, Ref { card: c2, .. }) => Ref {
            target,
            card: c1.widen(c2),
        },
        (
            Aggr {
                target,
                card: c1,
                mut children,
            },
            Aggr {
                card: c2,
                children: more,
                ..
            },
        ) => {
            children.extend(more);
            Aggr {
                target,
                card: c1.widen(c2),
                children,
            }
        }
        _ => return Err(hetero()),
    })
}
