//! Folding all variations of each type into one union type.
//!
//! ```text
//! cargo run --example union_schema
//! ```

use skiql::engine::{complete_schema, run_query, Options};
use skiql::fixtures::userprofile_aggregate;
use skiql::render::to_table;

fn main() {
    let model = userprofile_aggregate();

    let result = run_query(&model, "UNION FROM * TO *", Options::default()).expect("query is valid");
    println!("> UNION FROM * TO *");
    print!("{}", to_table(&result).to_text());
    println!();

    let whole = complete_schema(&model, true).expect("fixture is valid");
    println!("{} union types in the whole schema", whole.nodes.len());
}
