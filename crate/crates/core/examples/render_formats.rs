//! One result in each output format: a text table, Graphviz DOT and
//! graph-JSON.
//!
//! ```text
//! cargo run --example render_formats
//! cargo run --example render_formats | sed -n '/^digraph/,/^}/p' | dot -Tsvg > result.svg
//! ```

use skiql::engine::{run_query, Options};
use skiql::fixtures::userprofile_graph;
use skiql::render::{render, Format};

fn main() {
    let model = userprofile_graph();
    let result = run_query(&model, "FROM User TO Movie REF [stars: Number]", Options::default())
        .expect("query is valid");
    for format in [Format::Table, Format::Dot, Format::GraphJson] {
        println!("--- {}", format.media_type());
        print!("{}", render(&result, format));
    }
}
