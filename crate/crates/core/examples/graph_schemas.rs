//! Relationship types of a property graph schema: `REL` selects them by
//! name or by the entity types they connect.
//!
//! ```text
//! cargo run --example graph_schemas
//! ```

use skiql::engine::{run_query, Options};
use skiql::fixtures::userprofile_graph;
use skiql::render::to_table;

fn main() {
    let model = userprofile_graph();
    for q in [
        "REL watchedMovies",
        "REL Movie",
        "FROM User TO Movie REF [stars: Number]",
        "UNION FROM * TO *",
    ] {
        println!("> {q}");
        let result = run_query(&model, q, Options::default()).expect("query is valid");
        print!("{}", to_table(&result).to_text());
        println!();
    }
}
