//! Querying logical database schemas.
//!
//! Schemas of relational, document, columnar, key-value and graph stores are
//! represented uniformly as [`model::USchemaModel`] values. SkiQL statements
//! are parsed by [`syntax`], interpreted against a model by [`engine`], and
//! the resulting subschemas are rendered as Graphviz diagrams, text tables or
//! a JSON graph by [`render`].
//!
//! ```
//! use skiql::{engine, render, syntax};
//!
//! let model = skiql::fixtures::userprofile_aggregate();
//! let query = syntax::parse_query("FROM User TO >> Movie").unwrap();
//! let result = engine::execute(&model, &query).unwrap();
//! let table = render::to_table(&result);
//! assert!(table.to_text().contains("WatchedMovies"));
//! ```

pub mod cli;
pub mod engine;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod render;
pub mod service;
pub mod syntax;
