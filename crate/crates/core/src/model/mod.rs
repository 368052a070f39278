//! In-memory U-Schema models.
//!
//! A model is a set of entity types and relationship types. Every schema
//! type owns a list of structural variations, and every variation owns a set
//! of features (attributes, keys, references and aggregates). Models are
//! plain immutable values; derived views (feature classification, union
//! types, union schemas) are pure functions over them.

mod classify;
mod types;
mod union;
mod validate;

pub use classify::{classify_feature, feature_classes, FeatureClass};
pub use types::{
    Aggregate, Attribute, Cardinality, DataType, EntityType, Feature, FeatureKind, FeaturingRef,
    Key, Reference, RelationshipType, SchemaKind, SchemaType, SchemaTypeKind, StructuralVariation,
    USchemaModel,
};
pub use union::{fold_variations, union_schema, union_type};
pub(crate) use union::point_at_union_types;
pub use validate::{validate, Rule, Violation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("schema type `{type_name}` has no feature named `{feature}`")]
    NotFound { type_name: String, feature: String },
    #[error("feature `{feature}` of `{type_name}` is both {first} and {second}")]
    KindConflict {
        type_name: String,
        feature: String,
        first: FeatureKind,
        second: FeatureKind,
    },
    #[error("feature `{feature}` of `{type_name}` targets both `{first}` and `{second}`")]
    TargetConflict {
        type_name: String,
        feature: String,
        first: String,
        second: String,
    },
    #[error("schema type `{0}` has no variations")]
    NoVariations(String),
}
