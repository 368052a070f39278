//! Selecting entity type variations by name and by the features they hold.
//!
//! ```text
//! cargo run --example query_types
//! ```

use skiql::engine::{run_query, Options};
use skiql::fixtures::userprofile_aggregate;
use skiql::render::to_table;

fn main() {
    let model = userprofile_aggregate();
    for q in [
        "ENTITY User",
        "ENTITY User [surname: string]",
        "ENTITY * [name, email: String]",
        r#"ENTITY r"M.*" keys"#,
        "UNION ENTITY *",
    ] {
        println!("> {q}");
        match run_query(&model, q, Options::default()) {
            Ok(result) => print!("{}", to_table(&result).to_text()),
            Err(e) => println!("{}", e),
        }
        println!();
    }
}
