//! Query interpretation over an immutable model.
//!
//! Every query evaluates to a [`QueryResult`]: a subschema made of
//! variation nodes, whole-type nodes for reference targets, union nodes,
//! and aggregation, reference and featuring edges.

mod matching;
mod rel;
mod result;
mod types;

pub use matching::{compile_name_regex, match_feature, match_name, match_variation};
pub use result::{
    AggregationEdge, FeaturingEdge, NodeKey, NodeSlot, QueryResult, ReferenceEdge, ResultNode,
};

use thiserror::Error;

use crate::model::{ModelError, SchemaTypeKind, USchemaModel};
use crate::syntax::{parse_query, Query, SyntaxError};
use result::Builder;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("history is unavailable: no selected variation of {0} records when it was first seen")]
    HistoryUnavailable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Failure of [`run_query`]: the text does not parse, or evaluation failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    /// For `>>` targets, keep every simple path instead of only the
    /// shortest ones per target type.
    pub all_paths: bool,
}

pub fn execute(model: &USchemaModel, query: &Query) -> Result<QueryResult, EngineError> {
    execute_with(model, query, Options::default())
}

pub fn execute_with(
    model: &USchemaModel,
    query: &Query,
    options: Options,
) -> Result<QueryResult, EngineError> {
    match query {
        Query::Type(q) => types::run(model, q),
        Query::Rel(q) => rel::run(model, q, options),
    }
}

/// Parses and evaluates query text.
pub fn run_query(model: &USchemaModel, text: &str, options: Options) -> Result<QueryResult, QueryError> {
    let query = parse_query(text)?;
    Ok(execute_with(model, &query, options)?)
}

/// The whole model as a result: every variation, every relationship.
/// With `union`, each type is shown as its union type.
pub fn complete_schema(model: &USchemaModel, union: bool) -> Result<QueryResult, EngineError> {
    let mut b = Builder::default();
    for e in &model.entity_types {
        for v in &e.variations {
            b.add_variation(model, SchemaTypeKind::Entity, &e.name, v.id);
        }
    }
    for r in &model.relationship_types {
        for v in &r.variations {
            b.add_variation(model, SchemaTypeKind::Relationship, &r.name, v.id);
        }
    }
    for e in &model.entity_types {
        for v in &e.variations {
            let from = NodeKey::variation(SchemaTypeKind::Entity, &e.name, v.id);
            for f in v.relationships() {
                rel::record_hop(model, &mut b, &from, f, &rel::Hop::unconstrained(f));
            }
        }
    }
    if union {
        b = b.unionize(model)?;
    }
    Ok(b.finish(model, Some("the schema has no types".to_string()), false))
}
