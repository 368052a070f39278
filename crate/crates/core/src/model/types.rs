use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// The family of store a schema was extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SchemaKind {
    Aggregate,
    Graph,
    Relational,
}

impl fmt::Display for SchemaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemaKind::Aggregate => "aggregate",
            SchemaKind::Graph => "graph",
            SchemaKind::Relational => "relational",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct USchemaModel {
    pub name: String,
    pub kind: SchemaKind,
    #[serde(default)]
    pub entity_types: Vec<EntityType>,
    #[serde(default)]
    pub relationship_types: Vec<RelationshipType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EntityType {
    pub name: String,
    pub root: bool,
    pub variations: Vec<StructuralVariation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RelationshipType {
    pub name: String,
    pub variations: Vec<StructuralVariation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StructuralVariation {
    pub id: u32,
    #[serde(default)]
    pub instance_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_seen: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_seen: Option<NaiveDate>,
    pub features: Vec<Feature>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Feature {
    Attribute(Attribute),
    Key(Key),
    Reference(Reference),
    Aggregate(Aggregate),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Attribute {
    pub name: String,
    pub data_type: DataType,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Key {
    pub name: String,
    pub attribute_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Reference {
    pub name: String,
    pub target: String,
    pub cardinality: Cardinality,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub featured_by: Vec<FeaturingRef>,
}

/// A relationship-type variation that describes a graph reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct FeaturingRef {
    pub relationship_type: String,
    pub variation: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Aggregate {
    pub name: String,
    pub target: String,
    pub target_variation_ids: Vec<u32>,
    pub cardinality: Cardinality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureKind {
    Attribute,
    Key,
    Reference,
    Aggregate,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureKind::Attribute => "an attribute",
            FeatureKind::Key => "a key",
            FeatureKind::Reference => "a reference",
            FeatureKind::Aggregate => "an aggregate",
        })
    }
}

impl Feature {
    pub fn name(&self) -> &str {
        match self {
            Feature::Attribute(a) => &a.name,
            Feature::Key(k) => &k.name,
            Feature::Reference(r) => &r.name,
            Feature::Aggregate(a) => &a.name,
        }
    }

    pub fn kind(&self) -> FeatureKind {
        match self {
            Feature::Attribute(_) => FeatureKind::Attribute,
            Feature::Key(_) => FeatureKind::Key,
            Feature::Reference(_) => FeatureKind::Reference,
            Feature::Aggregate(_) => FeatureKind::Aggregate,
        }
    }

    /// References and aggregates.
    pub fn is_relationship(&self) -> bool {
        matches!(self, Feature::Reference(_) | Feature::Aggregate(_))
    }

    /// Target entity type of a reference or aggregate.
    pub fn target(&self) -> Option<&str> {
        match self {
            Feature::Reference(r) => Some(&r.target),
            Feature::Aggregate(a) => Some(&a.target),
            _ => None,
        }
    }

    pub fn cardinality(&self) -> Option<Cardinality> {
        match self {
            Feature::Reference(r) => Some(r.cardinality),
            Feature::Aggregate(a) => Some(a.cardinality),
            _ => None,
        }
    }

    /// Keys live in their own namespace: a key may carry the name of the
    /// attribute it is formed by.
    pub(crate) fn namespace(&self) -> u8 {
        match self {
            Feature::Key(_) => 1,
            _ => 0,
        }
    }

    pub(crate) fn sort_key(&self) -> (&str, u8) {
        (self.name(), self.namespace())
    }
}

/// Multiplicity of a reference or aggregate. Only the four combinations of
/// lower bound 0/1 and upper bound 1/many exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    ZeroOrOne,
    One,
    ZeroOrMany,
    OneOrMany,
}

impl Cardinality {
    pub fn new(lower: u8, many: bool) -> Cardinality {
        match (lower, many) {
            (0, false) => Cardinality::ZeroOrOne,
            (_, false) => Cardinality::One,
            (0, true) => Cardinality::ZeroOrMany,
            (_, true) => Cardinality::OneOrMany,
        }
    }

    pub fn lower(self) -> u8 {
        match self {
            Cardinality::ZeroOrOne | Cardinality::ZeroOrMany => 0,
            Cardinality::One | Cardinality::OneOrMany => 1,
        }
    }

    pub fn is_many(self) -> bool {
        matches!(self, Cardinality::ZeroOrMany | Cardinality::OneOrMany)
    }

    /// Smallest cardinality admitting everything either side admits.
    pub fn widen(self, other: Cardinality) -> Cardinality {
        Cardinality::new(
            self.lower().min(other.lower()),
            self.is_many() || other.is_many(),
        )
    }

    fn as_str(self) -> &'static str {
        match self {
            Cardinality::ZeroOrOne => "0..1",
            Cardinality::One => "1..1",
            Cardinality::ZeroOrMany => "0..*",
            Cardinality::OneOrMany => "1..*",
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.as_str())
    }
}

impl Serialize for Cardinality {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Cardinality {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let trimmed = s.trim_start_matches('[').trim_end_matches(']');
        match trimmed {
            "0..1" => Ok(Cardinality::ZeroOrOne),
            "1..1" => Ok(Cardinality::One),
            "0..*" => Ok(Cardinality::ZeroOrMany),
            "1..*" => Ok(Cardinality::OneOrMany),
            _ => Err(serde::de::Error::custom(format!(
                "invalid cardinality `{s}`, expected one of 0..1, 1..1, 0..*, 1..*"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum DataType {
    Number,
    String,
    Boolean,
    Array { element: Box<DataType> },
    Set { element: Box<DataType> },
    List { element: Box<DataType> },
    Tuple { elements: Vec<DataType> },
    Map { key: Box<DataType>, value: Box<DataType> },
    Union { members: Vec<DataType> },
    Unknown,
}

impl DataType {
    pub fn array(element: DataType) -> DataType {
        DataType::Array {
            element: Box::new(element),
        }
    }

    /// Joins two types into a flattened, sorted union. `Unknown` is absorbed
    /// by any known type.
    pub fn unify(self, other: DataType) -> DataType {
        let mut members = Vec::new();
        for t in [self, other] {
            match t {
                DataType::Unknown => {}
                DataType::Union { members: m } => members.extend(m),
                t => members.push(t),
            }
        }
        members.sort();
        members.dedup();
        match members.len() {
            0 => DataType::Unknown,
            1 => members.pop().unwrap(),
            _ => DataType::Union { members },
        }
    }

    /// Members of a union, or the type itself.
    pub fn alternatives(&self) -> &[DataType] {
        match self {
            DataType::Union { members } => members,
            t => std::slice::from_ref(t),
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataType::Number => f.write_str("Number"),
            DataType::String => f.write_str("String"),
            DataType::Boolean => f.write_str("Boolean"),
            DataType::Array { element } => match **element {
                DataType::Union { .. } => write!(f, "({element})[]"),
                _ => write!(f, "{element}[]"),
            },
            DataType::Set { element } => write!(f, "Set<{element}>"),
            DataType::List { element } => write!(f, "List<{element}>"),
            DataType::Tuple { elements } => {
                f.write_str("Tuple<")?;
                for (i, e) in elements.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(">")
            }
            DataType::Map { key, value } => write!(f, "Map<{key}, {value}>"),
            DataType::Union { members } => {
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
            DataType::Unknown => f.write_str("?"),
        }
    }
}

impl StructuralVariation {
    pub fn new(id: u32, features: Vec<Feature>) -> StructuralVariation {
        let mut v = StructuralVariation {
            id,
            instance_count: 0,
            first_seen: None,
            last_seen: None,
            features,
        };
        v.canonicalize();
        v
    }

    pub fn with_count(mut self, count: u64) -> StructuralVariation {
        self.instance_count = count;
        self
    }

    /// First non-key feature with this name (keys share names with their
    /// attributes).
    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.features
            .iter()
            .find(|f| f.name() == name && !matches!(f, Feature::Key(_)))
            .or_else(|| self.features.iter().find(|f| f.name() == name))
    }

    pub fn has_feature(&self, name: &str) -> bool {
        self.features.iter().any(|f| f.name() == name)
    }

    pub fn relationships(&self) -> impl Iterator<Item = &Feature> {
        self.features.iter().filter(|f| f.is_relationship())
    }

    pub fn keys(&self) -> impl Iterator<Item = &Key> {
        self.features.iter().filter_map(|f| match f {
            Feature::Key(k) => Some(k),
            _ => None,
        })
    }

    pub fn canonicalize(&mut self) {
        for f in &mut self.features {
            match f {
                Feature::Aggregate(a) => {
                    a.target_variation_ids.sort_unstable();
                    a.target_variation_ids.dedup();
                }
                Feature::Reference(r) => {
                    r.featured_by.sort();
                    r.featured_by.dedup();
                }
                Feature::Attribute(_) | Feature::Key(_) => {}
            }
        }
        self.features.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }
}

/// Entity or relationship type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SchemaTypeKind {
    Entity,
    Relationship,
}

/// Common view over entity and relationship types.
pub trait SchemaType {
    fn name(&self) -> &str;
    fn variations(&self) -> &[StructuralVariation];
    fn type_kind(&self) -> SchemaTypeKind;

    fn variation(&self, id: u32) -> Option<&StructuralVariation> {
        self.variations().iter().find(|v| v.id == id)
    }
}

impl SchemaType for EntityType {
    fn name(&self) -> &str {
        &self.name
    }
    fn variations(&self) -> &[StructuralVariation] {
        &self.variations
    }
    fn type_kind(&self) -> SchemaTypeKind {
        SchemaTypeKind::Entity
    }
}

impl SchemaType for RelationshipType {
    fn name(&self) -> &str {
        &self.name
    }
    fn variations(&self) -> &[StructuralVariation] {
        &self.variations
    }
    fn type_kind(&self) -> SchemaTypeKind {
        SchemaTypeKind::Relationship
    }
}

impl EntityType {
    pub fn new(name: impl Into<String>, root: bool, variations: Vec<StructuralVariation>) -> Self {
        EntityType {
            name: name.into(),
            root,
            variations,
        }
    }
}

impl RelationshipType {
    pub fn new(name: impl Into<String>, variations: Vec<StructuralVariation>) -> Self {
        RelationshipType {
            name: name.into(),
            variations,
        }
    }
}

impl USchemaModel {
    pub fn new(
        name: impl Into<String>,
        kind: SchemaKind,
        entity_types: Vec<EntityType>,
        relationship_types: Vec<RelationshipType>,
    ) -> USchemaModel {
        let mut m = USchemaModel {
            name: name.into(),
            kind,
            entity_types,
            relationship_types,
        };
        m.canonicalize();
        m
    }

    pub fn entity_type(&self, name: &str) -> Option<&EntityType> {
        self.entity_types.iter().find(|e| e.name == name)
    }

    pub fn relationship_type(&self, name: &str) -> Option<&RelationshipType> {
        self.relationship_types.iter().find(|r| r.name == name)
    }

    /// Sorts types by name, variations by id and features by name so that
    /// structurally equal models compare equal.
    pub fn canonicalize(&mut self) {
        self.entity_types.sort_by(|a, b| a.name.cmp(&b.name));
        self.relationship_types.sort_by(|a, b| a.name.cmp(&b.name));
        let variations = self
            .entity_types
            .iter_mut()
            .map(|e| &mut e.variations)
            .chain(self.relationship_types.iter_mut().map(|r| &mut r.variations));
        for vs in variations {
            vs.sort_by_key(|v| v.id);
            for v in vs.iter_mut() {
                v.canonicalize();
            }
        }
    }

    pub fn canonical(&self) -> USchemaModel {
        let mut m = self.clone();
        m.canonicalize();
        m
    }

    pub fn all_variations(&self) -> impl Iterator<Item = (&dyn SchemaType, &StructuralVariation)> {
        let entities = self
            .entity_types
            .iter()
            .flat_map(|e| e.variations.iter().map(move |v| (e as &dyn SchemaType, v)));
        let rels = self
            .relationship_types
            .iter()
            .flat_map(|r| r.variations.iter().map(move |v| (r as &dyn SchemaType, v)));
        entities.chain(rels)
    }
}
