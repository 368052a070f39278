use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ModelError, SchemaType};

/// Whether a feature occurs in every variation of its type, in some of them,
/// or in exactly one of several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FeatureClass {
    Shared,
    NonShared,
    Specific,
}

impl FeatureClass {
    /// Diagram prefix: `+`, `?` or `-`.
    pub fn prefix(self) -> char {
        match self {
            FeatureClass::Shared => '+',
            FeatureClass::NonShared => '?',
            FeatureClass::Specific => '-',
        }
    }

    /// Specific features are also non-shared.
    pub fn satisfies(self, required: FeatureClass) -> bool {
        match required {
            FeatureClass::NonShared => self != FeatureClass::Shared,
            other => self == other,
        }
    }

    fn from_occurrences(occurrences: usize, total: usize) -> FeatureClass {
        if occurrences == total {
            FeatureClass::Shared
        } else if occurrences == 1 {
            FeatureClass::Specific
        } else {
            FeatureClass::NonShared
        }
    }
}

impl fmt::Display for FeatureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeatureClass::Shared => "shared",
            FeatureClass::NonShared => "non-shared",
            FeatureClass::Specific => "specific",
        })
    }
}

pub fn classify_feature<T: SchemaType + ?Sized>(
    ty: &T,
    feature_name: &str,
) -> Result<FeatureClass, ModelError> {
    let total = ty.variations().len();
    let occurrences = ty
        .variations()
        .iter()
        .filter(|v| v.has_feature(feature_name))
        .count();
    if occurrences == 0 {
        return Err(ModelError::NotFound {
            type_name: ty.name().to_string(),
            feature: feature_name.to_string(),
        });
    }
    Ok(FeatureClass::from_occurrences(occurrences, total))
}

/// Class of every distinct feature name of a type.
pub fn feature_classes<T: SchemaType + ?Sized>(ty: &T) -> BTreeMap<String, FeatureClass> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for v in ty.variations() {
        let mut names: Vec<&str> = v.features.iter().map(|f| f.name()).collect();
        names.sort_unstable();
        names.dedup();
        for n in names {
            *counts.entry(n).or_default() += 1;
        }
    }
    let total = ty.variations().len();
    counts
        .into_iter()
        .map(|(n, c)| (n.to_string(), FeatureClass::from_occurrences(c, total)))
        .collect()
}
