//! Parsing, canonical unparsing and error reporting with positions.
//!
//! ```text
//! cargo run --example syntax_errors
//! ```

use skiql::syntax::{parse_query, unparse};

fn main() {
    for text in [
        "FROM User[surname:string]\n  TO Address AGGR",
        "FROM * >> TO User",
        "ENTITY User\n  keys $",
        "ENTITY Order history between (2021-01-01, 2020-01-01)",
    ] {
        match parse_query(text) {
            Ok(q) => println!("ok: {}", unparse(&q)),
            Err(e) => println!("{} error\n{}", e.category(), e.annotate(text)),
        }
        println!();
    }
}
