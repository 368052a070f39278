//! The user-profile example schemas and samples, bundled for examples,
//! tests and the demo console.

use serde_json::Value;

use crate::io::{load_schema, DocumentSample, ExtractionConfig};
use crate::model::USchemaModel;

pub const USERPROFILE_AGGREGATE: &str = include_str!("../fixtures/userprofile-aggregate.uschema.json");
pub const USERPROFILE_GRAPH: &str = include_str!("../fixtures/userprofile-graph.uschema.json");
const USER_RECORDS: &str = include_str!("../fixtures/samples/userprofile/User.jsonl");
const MOVIE_RECORDS: &str = include_str!("../fixtures/samples/userprofile/Movie.jsonl");
const SAMPLE_CONFIG: &str = include_str!("../fixtures/samples/userprofile.config.json");

/// User profiles with embedded addresses and watched movies, and a Movie
/// collection referenced from users.
pub fn userprofile_aggregate() -> USchemaModel {
    load_schema(USERPROFILE_AGGREGATE).expect("bundled fixture is valid")
}

/// The same domain as a property graph: users, movies and addresses as
/// nodes, `address`, `favoriteMovies` and `watchedMovies` as relationships.
pub fn userprofile_graph() -> USchemaModel {
    load_schema(USERPROFILE_GRAPH).expect("bundled fixture is valid")
}

/// Three records: two user profiles and one movie.
pub fn userprofile_samples() -> Vec<DocumentSample> {
    let parse = |name: &str, text: &str| DocumentSample {
        collection_name: name.to_string(),
        records: text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str::<Value>(l).expect("bundled sample is valid JSON"))
            .collect(),
    };
    vec![parse("User", USER_RECORDS), parse("Movie", MOVIE_RECORDS)]
}

pub fn userprofile_config() -> ExtractionConfig {
    serde_json::from_str(SAMPLE_CONFIG).expect("bundled config is valid")
}
