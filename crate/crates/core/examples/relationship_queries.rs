//! Aggregations and references between entity types.
//!
//! ```text
//! cargo run --example relationship_queries
//! ```

use skiql::engine::{run_query, Options};
use skiql::fixtures::userprofile_aggregate;
use skiql::render::to_table;

fn main() {
    let model = userprofile_aggregate();
    for q in [
        "FROM User TO Address",
        "FROM User [surname: string] TO Address [postcode] AGGR",
        "FROM User TO Movie REF, Address AGGR",
        "FROM User TO *",
        "FROM _ TO User",
    ] {
        println!("> {q}");
        let result = run_query(&model, q, Options::default()).expect("query is valid");
        print!("{}", to_table(&result).to_text());
        println!();
    }
}
