//! Inferring a schema from JSON documents, saving it and loading it back.
//!
//! ```text
//! cargo run --example extract_documents
//! ```

use skiql::fixtures::{userprofile_config, userprofile_samples};
use skiql::io::{extract_schema, load_schema, save_schema};

fn main() {
    let samples = userprofile_samples();
    let model = extract_schema(&samples, &userprofile_config()).expect("samples are well formed");
    for e in &model.entity_types {
        let root = if e.root { "root" } else { "aggregated" };
        println!("{:<14} {root:<10} {} variation(s)", e.name, e.variations.len());
    }

    let document = save_schema(&model);
    let reloaded = load_schema(&document).expect("saved schemas load");
    assert_eq!(save_schema(&reloaded), document);
    println!("\n{} bytes of U-Schema JSON, stable across load and save", document.len());
}
