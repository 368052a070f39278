//! Variations carry the date they were first seen when documents hold a
//! timestamp; `history` selects and orders them by that date.
//!
//! ```text
//! cargo run --example schema_history
//! ```

use serde_json::json;

use skiql::engine::{run_query, Options};
use skiql::io::{extract_schema, DocumentSample, ExtractionConfig};
use skiql::render::to_table;

fn main() {
    let orders = DocumentSample {
        collection_name: "Order".to_string(),
        records: vec![
            json!({ "_id": 1, "total": 10, "createdAt": "2019-03-02" }),
            json!({ "_id": 2, "total": 12, "coupon": "SPRING", "createdAt": "2020-04-11" }),
            json!({ "_id": 3, "total": 9, "coupon": "FALL", "giftWrap": true, "createdAt": "2021-10-30" }),
        ],
    };
    let config = ExtractionConfig {
        timestamp_field: Some("createdAt".to_string()),
        ..ExtractionConfig::default()
    };
    let model = extract_schema(&[orders], &config).expect("samples are well formed");
    for q in [
        "ENTITY Order history after 2019-12-31",
        "ENTITY Order history between (2019-01-01, 2020-12-31)",
    ] {
        println!("> {q}");
        let result = run_query(&model, q, Options::default()).expect("query is valid");
        print!("{}", to_table(&result).to_text());
        println!();
    }
}
