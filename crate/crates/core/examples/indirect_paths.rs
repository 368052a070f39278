//! Reaching types through chains of aggregations and references with `>>`.
//! By default only the shortest paths to each target type are kept.
//!
//! ```text
//! cargo run --example indirect_paths
//! ```

use skiql::engine::{run_query, Options};
use skiql::fixtures::userprofile_aggregate;
use skiql::render::to_table;

fn main() {
    let model = userprofile_aggregate();
    for (label, options) in [
        ("shortest paths", Options::default()),
        ("all simple paths", Options { all_paths: true }),
    ] {
        for q in ["FROM User TO >> Movie", "FROM * TO >> User"] {
            println!("> {q}   ({label})");
            let result = run_query(&model, q, options).expect("query is valid");
            print!("{}", to_table(&result).to_text());
            println!();
        }
    }
}
