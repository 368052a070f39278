//! Schema documents (`.uschema.json`) and extraction from document samples.

mod extract;

pub use extract::{
    extract_schema, read_samples_dir, DocumentSample, ExtractError, ExtractionConfig,
    ReferenceHeuristic,
};

use std::fmt;

use thiserror::Error;

use crate::model::{validate, USchemaModel, Violation};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid schema: {}", ViolationList(.0))]
    Validation(Vec<Violation>),
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Parses and validates a schema document.
pub fn load_schema(document: &str) -> Result<USchemaModel, LoadError> {
    let mut model: USchemaModel =
        serde_json::from_str(document).map_err(|e| LoadError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    model.canonicalize();
    let violations = validate(&model);
    if violations.is_empty() {
        Ok(model)
    } else {
        Err(LoadError::Validation(violations))
    }
}

/// Canonical document text: types sorted by name, variations by id,
/// features by name, two-space indentation, trailing newline.
pub fn save_schema(model: &USchemaModel) -> String {
    let mut text = serde_json::to_string_pretty(&model.canonical())
        .expect("schema models always serialize");
    text.push('\n');
    text
}
