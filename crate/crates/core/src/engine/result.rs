use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::model::{
    feature_classes, point_at_union_types, Cardinality, FeatureClass, ModelError, SchemaType,
    SchemaTypeKind, StructuralVariation, USchemaModel,
};

/// Which part of a schema type a result node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase", tag = "slot", content = "id")]
pub enum NodeSlot {
    /// The type as a whole, used for reference targets.
    Type,
    Variation(u32),
    /// The union of the type's selected variations.
    Union,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeKey {
    pub kind: SchemaTypeKind,
    pub type_name: String,
    pub slot: NodeSlot,
}

impl NodeKey {
    pub fn variation(kind: SchemaTypeKind, type_name: &str, id: u32) -> NodeKey {
        NodeKey {
            kind,
            type_name: type_name.to_string(),
            slot: NodeSlot::Variation(id),
        }
    }

    pub fn entity_type(type_name: &str) -> NodeKey {
        NodeKey {
            kind: SchemaTypeKind::Entity,
            type_name: type_name.to_string(),
            slot: NodeSlot::Type,
        }
    }
}

/// `User`, `User[2]` or `User[union]`.
impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            NodeSlot::Type => f.write_str(&self.type_name),
            NodeSlot::Variation(id) => write!(f, "{}[{id}]", self.type_name),
            NodeSlot::Union => write!(f, "{}[union]", self.type_name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultNode {
    pub key: NodeKey,
    /// Root entity type (relationship types and aggregated types are not).
    pub root: bool,
    /// Absent for whole-type nodes.
    pub variation: Option<StructuralVariation>,
    /// Classes of the features of the schema type in the queried model.
    pub feature_classes: BTreeMap<String, FeatureClass>,
    /// Relationship features of the variation not drawn as edges.
    pub inline: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AggregationEdge {
    pub from: NodeKey,
    pub feature: String,
    pub cardinality: Cardinality,
    pub to: NodeKey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReferenceEdge {
    pub from: NodeKey,
    pub feature: String,
    pub cardinality: Cardinality,
    pub to: NodeKey,
}

/// Links the source of a graph reference to a relationship-type variation
/// describing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FeaturingEdge {
    pub from: NodeKey,
    pub feature: String,
    pub to: NodeKey,
}

/// A subschema. Nodes are sorted by key (or by first-seen date for history
/// queries), edges by source, feature and target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryResult {
    pub nodes: Vec<ResultNode>,
    pub aggregations: Vec<AggregationEdge>,
    pub references: Vec<ReferenceEdge>,
    pub featuring: Vec<FeaturingEdge>,
    /// Explanation of an empty result; present iff there are no nodes.
    pub message: Option<String>,
    /// Nodes are in chronological order.
    pub timeline: bool,
}

impl QueryResult {
    pub fn node(&self, key: &NodeKey) -> Option<&ResultNode> {
        self.nodes.iter().find(|n| &n.key == key)
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

pub(crate) fn schema_type<'m>(
    model: &'m USchemaModel,
    kind: SchemaTypeKind,
    name: &str,
) -> Option<&'m dyn SchemaType> {
    match kind {
        SchemaTypeKind::Entity => model.entity_type(name).map(|t| t as &dyn SchemaType),
        SchemaTypeKind::Relationship => model.relationship_type(name).map(|t| t as &dyn SchemaType),
    }
}

type EdgeKey = (NodeKey, String, NodeKey);

/// Accumulates nodes and edges, deduplicating as it goes.
#[derive(Debug, Clone, Default)]
pub(crate) struct Builder {
    nodes: BTreeMap<NodeKey, Option<StructuralVariation>>,
    aggregations: BTreeMap<EdgeKey, Cardinality>,
    references: BTreeMap<EdgeKey, Cardinality>,
    featuring: BTreeSet<EdgeKey>,
}

impl Builder {
    pub fn add_node(&mut self, key: NodeKey, variation: Option<StructuralVariation>) {
        self.nodes.entry(key).or_insert(variation);
    }

    pub fn add_variation(&mut self, model: &USchemaModel, kind: SchemaTypeKind, type_name: &str, id: u32) -> NodeKey {
        let key = NodeKey::variation(kind, type_name, id);
        if !self.nodes.contains_key(&key) {
            let v = schema_type(model, kind, type_name).and_then(|t| t.variation(id)).cloned();
            self.nodes.insert(key.clone(), v);
        }
        key
    }

    pub fn add_type(&mut self, type_name: &str) -> NodeKey {
        let key = NodeKey::entity_type(type_name);
        self.nodes.entry(key.clone()).or_insert(None);
        key
    }

    pub fn add_aggregation(&mut self, from: NodeKey, feature: &str, card: Cardinality, to: NodeKey) {
        widen_into(&mut self.aggregations, (from, feature.to_string(), to), card);
    }

    pub fn add_reference(&mut self, from: NodeKey, feature: &str, card: Cardinality, to: NodeKey) {
        widen_into(&mut self.references, (from, feature.to_string(), to), card);
    }

    pub fn add_featuring(&mut self, from: NodeKey, feature: &str, to: NodeKey) {
        self.featuring.insert((from, feature.to_string(), to));
    }

    pub fn merge(&mut self, other: Builder) {
        for (k, v) in other.nodes {
            self.add_node(k, v);
        }
        for (k, c) in other.aggregations {
            widen_into(&mut self.aggregations, k, c);
        }
        for (k, c) in other.references {
            widen_into(&mut self.references, k, c);
        }
        self.featuring.extend(other.featuring);
    }

    /// Replaces every type's nodes by one union node. Whole-type nodes pull
    /// in all variations of their type.
    pub fn unionize(self, model: &USchemaModel) -> Result<Builder, ModelError> {
        type Members = Vec<(NodeSlot, Option<StructuralVariation>)>;
        let mut groups: BTreeMap<(SchemaTypeKind, String), Members> = BTreeMap::new();
        for (key, v) in self.nodes {
            groups
                .entry((key.kind, key.type_name))
                .or_default()
                .push((key.slot, v));
        }
        let mut out = Builder::default();
        for ((kind, name), members) in groups {
            let whole = members.iter().any(|(slot, _)| *slot == NodeSlot::Type);
            let mut folded = if whole {
                let ty = schema_type(model, kind, &name)
                    .ok_or_else(|| ModelError::NoVariations(name.clone()))?;
                crate::model::union_type(ty)?
            } else {
                crate::model::fold_variations(&name, members.iter().filter_map(|(_, v)| v.as_ref()))?
            };
            point_at_union_types(&mut folded);
            out.nodes.insert(union_key(kind, &name), Some(folded));
        }
        let remap = |(from, feature, to): EdgeKey| {
            (union_key(from.kind, &from.type_name), feature, union_key(to.kind, &to.type_name))
        };
        for (k, c) in self.aggregations {
            widen_into(&mut out.aggregations, remap(k), c);
        }
        for (k, c) in self.references {
            widen_into(&mut out.references, remap(k), c);
        }
        out.featuring = self.featuring.into_iter().map(remap).collect();
        Ok(out)
    }

    pub fn finish(self, model: &USchemaModel, message: Option<String>, timeline: bool) -> QueryResult {
        let mut edge_features: BTreeMap<&NodeKey, BTreeSet<&str>> = BTreeMap::new();
        for (from, feature, _) in self.aggregations.keys().chain(self.references.keys()) {
            edge_features.entry(from).or_default().insert(feature);
        }
        let mut classes_cache: BTreeMap<(SchemaTypeKind, &str), BTreeMap<String, FeatureClass>> =
            BTreeMap::new();
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (key, variation) in &self.nodes {
            let classes = classes_cache
                .entry((key.kind, &key.type_name))
                .or_insert_with(|| {
                    schema_type(model, key.kind, &key.type_name)
                        .map(feature_classes)
                        .unwrap_or_default()
                })
                .clone();
            let used = edge_features.get(key);
            let mut inline: Vec<String> = variation
                .iter()
                .flat_map(|v| v.relationships())
                .map(|f| f.name())
                .filter(|n| !used.is_some_and(|u| u.contains(n)))
                .map(str::to_string)
                .collect();
            inline.dedup();
            let root = key.kind == SchemaTypeKind::Entity
                && model.entity_type(&key.type_name).is_some_and(|e| e.root);
            nodes.push(ResultNode {
                key: key.clone(),
                root,
                variation: variation.clone(),
                feature_classes: classes,
                inline,
            });
        }
        if timeline {
            nodes.sort_by(|a, b| {
                let seen = |n: &ResultNode| n.variation.as_ref().and_then(|v| v.first_seen);
                (seen(a).is_none(), seen(a), &a.key).cmp(&(seen(b).is_none(), seen(b), &b.key))
            });
        }
        let message = if nodes.is_empty() {
            Some(message.unwrap_or_else(|| "empty result".to_string()))
        } else {
            None
        };
        QueryResult {
            nodes,
            aggregations: self
                .aggregations
                .into_iter()
                .map(|((from, feature, to), cardinality)| AggregationEdge {
                    from,
                    feature,
                    cardinality,
                    to,
                })
                .collect(),
            references: self
                .references
                .into_iter()
                .map(|((from, feature, to), cardinality)| ReferenceEdge {
                    from,
                    feature,
                    cardinality,
                    to,
                })
                .collect(),
            featuring: self
                .featuring
                .into_iter()
                .map(|(from, feature, to)| FeaturingEdge { from, feature, to })
                .collect(),
            message,
            timeline,
        }
    }
}

fn union_key(kind: SchemaTypeKind, name: &str) -> NodeKey {
    NodeKey {
        kind,
        type_name: name.to_string(),
        slot: NodeSlot::Union,
    }
}

fn widen_into(map: &mut BTreeMap<EdgeKey, Cardinality>, key: EdgeKey, card: Cardinality) {
    map.entry(key)
        .and_modify(|c| *c = c.widen(card))
        .or_insert(card);
}
