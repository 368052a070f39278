//! A slow, direct evaluator used to check the engine.
//!
//! Names and filters are tested feature by feature, `>>` targets by
//! enumerating walks of increasing length until every reachable target type
//! has been met.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use skiql::engine::{NodeSlot, QueryResult};
use skiql::model::{
    DataType, Feature, FeatureClass, SchemaTypeKind, StructuralVariation, USchemaModel,
};
use skiql::syntax::{
    AttributeTypeSpec, BasicType, FeatureSpec, FeatureTypeSpec, FromClause, Interval, NameSpec,
    Operation, Query, RelKind, RelQuery, RelSpec, TargetSpec, TypeQuery, TypeTarget,
    VariationFilter,
};

use super::regex_oracle;

type Card = (u8, bool);
type Edge = (String, String, String);

/// Comparable summary of a result.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Shape {
    /// Node key to tagged feature names of its variation.
    pub nodes: BTreeMap<String, BTreeSet<String>>,
    pub inline: BTreeMap<String, BTreeSet<String>>,
    pub aggregations: BTreeMap<Edge, Card>,
    pub references: BTreeMap<Edge, Card>,
    pub featuring: BTreeSet<Edge>,
    pub empty: bool,
    pub timeline: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Result(Shape),
    HistoryUnavailable,
}

fn tag(f: &Feature) -> String {
    match f {
        Feature::Attribute(a) => format!("a:{}", a.name),
        Feature::Key(k) => format!("k:{}", k.name),
        Feature::Reference(r) => format!("r:{}", r.name),
        Feature::Aggregate(a) => format!("g:{}", a.name),
    }
}

fn tags(v: &StructuralVariation) -> BTreeSet<String> {
    v.features.iter().map(tag).collect()
}

fn card(c: skiql::model::Cardinality) -> Card {
    (c.lower(), c.is_many())
}

fn key_string(kind: SchemaTypeKind, name: &str, slot: &str) -> String {
    let k = match kind {
        SchemaTypeKind::Entity => "E",
        SchemaTypeKind::Relationship => "R",
    };
    format!("{k}:{name}{slot}")
}

pub fn shape_of(r: &QueryResult) -> Shape {
    let key = |k: &skiql::engine::NodeKey| {
        let slot = match k.slot {
            NodeSlot::Type => String::new(),
            NodeSlot::Variation(id) => format!("[{id}]"),
            NodeSlot::Union => "[union]".to_string(),
        };
        key_string(k.kind, &k.type_name, &slot)
    };
    let mut s = Shape {
        empty: r.nodes.is_empty(),
        timeline: r.timeline,
        ..Shape::default()
    };
    for n in &r.nodes {
        s.nodes.insert(key(&n.key), n.variation.as_ref().map(tags).unwrap_or_default());
        s.inline.insert(key(&n.key), n.inline.iter().cloned().collect());
    }
    for e in &r.aggregations {
        s.aggregations.insert((key(&e.from), e.feature.clone(), key(&e.to)), card(e.cardinality));
    }
    for e in &r.references {
        s.references.insert((key(&e.from), e.feature.clone(), key(&e.to)), card(e.cardinality));
    }
    for e in &r.featuring {
        s.featuring.insert((key(&e.from), e.feature.clone(), key(&e.to)));
    }
    s
}

// ---- predicates ----

pub fn name_matches(spec: &NameSpec, name: &str) -> bool {
    match spec {
        NameSpec::Exact(s) => s == name,
        NameSpec::Prefix(s) => name.len() >= s.len() && &name[..s.len()] == s,
        NameSpec::Suffix(s) => name.len() >= s.len() && &name[name.len() - s.len()..] == s,
        NameSpec::Contains(s) => (0..=name.len().saturating_sub(s.len()))
            .any(|i| name.len() >= s.len() && &name[i..i + s.len()] == s),
        NameSpec::All => true,
        NameSpec::Regex(p) => regex_oracle::full_match(p, name),
    }
}

fn class_of(variations: &[StructuralVariation], name: &str) -> FeatureClass {
    let n = variations.len();
    let c = variations
        .iter()
        .filter(|v| v.features.iter().any(|f| f.name() == name))
        .count();
    if c == n {
        FeatureClass::Shared
    } else if c == 1 {
        FeatureClass::Specific
    } else {
        FeatureClass::NonShared
    }
}

fn basic_ok(b: BasicType, t: &DataType) -> bool {
    match b {
        BasicType::Number => *t == DataType::Number,
        BasicType::String => *t == DataType::String,
        BasicType::Boolean => *t == DataType::Boolean,
    }
}

fn attr_ok(spec: &AttributeTypeSpec, t: &DataType) -> bool {
    if let DataType::Union { members } = t {
        return members.iter().any(|m| attr_ok(spec, m));
    }
    match spec {
        AttributeTypeSpec::Basic(b) => basic_ok(b.ty, t),
        AttributeTypeSpec::Array(s) => matches!(t, DataType::Array { element } if attr_ok(s, element)),
        AttributeTypeSpec::Set(s) => matches!(t, DataType::Set { element } if attr_ok(s, element)),
        AttributeTypeSpec::List(s) => matches!(t, DataType::List { element } if attr_ok(s, element)),
        AttributeTypeSpec::Tuple(items) => match t {
            DataType::Tuple { elements } if elements.len() == items.len() => {
                (0..items.len()).all(|i| attr_ok(&items[i], &elements[i]))
            }
            _ => false,
        },
        AttributeTypeSpec::Map(k, v) => match t {
            DataType::Map { key, value } => basic_ok(k.ty, key) && attr_ok(v, value),
            _ => false,
        },
    }
}

fn feature_ok(spec: &FeatureSpec, f: &Feature, siblings: &[StructuralVariation]) -> bool {
    if f.name().to_lowercase() != spec.name.to_lowercase() {
        return false;
    }
    if let Some(required) = spec.class {
        let c = class_of(siblings, f.name());
        let ok = match required {
            FeatureClass::Shared => c == FeatureClass::Shared,
            FeatureClass::Specific => c == FeatureClass::Specific,
            FeatureClass::NonShared => c != FeatureClass::Shared,
        };
        if !ok {
            return false;
        }
    }
    match &spec.type_spec {
        None => true,
        Some(FeatureTypeSpec::Unknown) => {
            matches!(f, Feature::Attribute(a) if a.data_type == DataType::Unknown)
        }
        Some(FeatureTypeSpec::Attribute(s)) => {
            matches!(f, Feature::Attribute(a) if attr_ok(s, &a.data_type))
        }
        Some(FeatureTypeSpec::Aggr(t)) => match f {
            Feature::Aggregate(a) => t.is_none() || t.as_deref() == Some(a.target.as_str()),
            _ => false,
        },
        Some(FeatureTypeSpec::Ref(t)) => match f {
            Feature::Reference(r) => t.is_none() || t.as_deref() == Some(r.target.as_str()),
            _ => false,
        },
    }
}

pub fn passes(filter: Option<&VariationFilter>, v: &StructuralVariation, siblings: &[StructuralVariation]) -> bool {
    let Some(filter) = filter else { return true };
    for spec in &filter.features {
        if !v.features.iter().any(|f| feature_ok(spec, f, siblings)) {
            return false;
        }
    }
    true
}

fn in_interval(i: &Interval, d: NaiveDate) -> bool {
    match *i {
        Interval::Before(x) => d < x,
        Interval::After(x) => d > x,
        Interval::Between(a, b) => d >= a && d <= b,
    }
}

// ---- accumulation ----

#[derive(Debug, Clone)]
struct Node {
    kind: SchemaTypeKind,
    type_name: String,
    whole: bool,
    features: BTreeSet<String>,
    rels: BTreeSet<String>,
}

#[derive(Debug, Clone, Default)]
struct Acc {
    nodes: BTreeMap<String, Node>,
    aggregations: BTreeMap<Edge, Card>,
    references: BTreeMap<Edge, Card>,
    featuring: BTreeSet<Edge>,
}

fn widen(a: Card, b: Card) -> Card {
    (a.0.min(b.0), a.1 || b.1)
}

fn variations_of<'m>(m: &'m USchemaModel, kind: SchemaTypeKind, name: &str) -> &'m [StructuralVariation] {
    match kind {
        SchemaTypeKind::Entity => &m.entity_types.iter().find(|e| e.name == name).unwrap().variations,
        SchemaTypeKind::Relationship => {
            &m.relationship_types.iter().find(|r| r.name == name).unwrap().variations
        }
    }
}

impl Acc {
    fn var_with(&mut self, kind: SchemaTypeKind, t: &str, v: &StructuralVariation) -> String {
        let k = key_string(kind, t, &format!("[{}]", v.id));
        self.nodes.entry(k.clone()).or_insert_with(|| Node {
            kind,
            type_name: t.to_string(),
            whole: false,
            features: tags(v),
            rels: v.features.iter().filter(|f| f.is_relationship()).map(|f| f.name().to_string()).collect(),
        });
        k
    }

    fn var(&mut self, m: &USchemaModel, kind: SchemaTypeKind, t: &str, id: u32) -> String {
        let v = variations_of(m, kind, t).iter().find(|v| v.id == id).unwrap().clone();
        self.var_with(kind, t, &v)
    }

    fn whole(&mut self, t: &str) -> String {
        let k = key_string(SchemaTypeKind::Entity, t, "");
        self.nodes.entry(k.clone()).or_insert_with(|| Node {
            kind: SchemaTypeKind::Entity,
            type_name: t.to_string(),
            whole: true,
            features: BTreeSet::new(),
            rels: BTreeSet::new(),
        });
        k
    }

    fn edge(map: &mut BTreeMap<Edge, Card>, e: Edge, c: Card) {
        let c = match map.get(&e) {
            Some(&old) => widen(old, c),
            None => c,
        };
        map.insert(e, c);
    }

    fn absorb(&mut self, other: Acc) {
        for (k, n) in other.nodes {
            self.nodes.entry(k).or_insert(n);
        }
        for (e, c) in other.aggregations {
            Acc::edge(&mut self.aggregations, e, c);
        }
        for (e, c) in other.references {
            Acc::edge(&mut self.references, e, c);
        }
        self.featuring.extend(other.featuring);
    }

    fn union(self, m: &USchemaModel) -> Acc {
        let mut out = Acc::default();
        let ukey = |k: &str| -> String {
            let base = k.split('[').next().unwrap();
            format!("{base}[union]")
        };
        for (k, n) in &self.nodes {
            let uk = ukey(k);
            let entry = out.nodes.entry(uk).or_insert_with(|| Node {
                whole: false,
                features: BTreeSet::new(),
                rels: BTreeSet::new(),
                ..n.clone()
            });
            let all: Vec<StructuralVariation> = if n.whole {
                variations_of(m, n.kind, &n.type_name).to_vec()
            } else {
                vec![]
            };
            entry.features.extend(n.features.iter().cloned());
            entry.rels.extend(n.rels.iter().cloned());
            for v in &all {
                entry.features.extend(tags(v));
                entry.rels.extend(v.features.iter().filter(|f| f.is_relationship()).map(|f| f.name().to_string()));
            }
        }
        for ((a, f, b), c) in self.aggregations {
            Acc::edge(&mut out.aggregations, (ukey(&a), f, ukey(&b)), c);
        }
        for ((a, f, b), c) in self.references {
            Acc::edge(&mut out.references, (ukey(&a), f, ukey(&b)), c);
        }
        for (a, f, b) in self.featuring {
            out.featuring.insert((ukey(&a), f, ukey(&b)));
        }
        out
    }

    fn shape(self, timeline: bool) -> Shape {
        let mut s = Shape {
            empty: self.nodes.is_empty(),
            timeline,
            ..Shape::default()
        };
        for (k, n) in &self.nodes {
            let used: BTreeSet<&String> = self
                .aggregations
                .keys()
                .chain(self.references.keys())
                .filter(|(a, _, _)| a == k)
                .map(|(_, f, _)| f)
                .collect();
            s.inline.insert(
                k.clone(),
                n.rels.iter().filter(|r| !used.contains(r)).cloned().collect(),
            );
            s.nodes.insert(k.clone(), n.features.clone());
        }
        s.aggregations = self.aggregations;
        s.references = self.references;
        s.featuring = self.featuring;
        s
    }
}

// ---- type queries ----

fn keys_only(v: &StructuralVariation) -> Option<StructuralVariation> {
    let mut key_attrs = BTreeSet::new();
    let mut any = false;
    for f in &v.features {
        if let Feature::Key(k) = f {
            any = true;
            key_attrs.extend(k.attribute_names.iter().cloned());
        }
    }
    if !any {
        return None;
    }
    let mut out = v.clone();
    out.features = v
        .features
        .iter()
        .filter(|f| match f {
            Feature::Key(_) => true,
            Feature::Attribute(a) => key_attrs.contains(&a.name),
            _ => false,
        })
        .cloned()
        .collect();
    Some(out)
}

fn type_query(m: &USchemaModel, q: &TypeQuery) -> Outcome {
    let mut selected: Vec<(SchemaTypeKind, String, Vec<StructuralVariation>)> = Vec::new();
    let mut candidates: Vec<(SchemaTypeKind, &str, &[StructuralVariation])> = Vec::new();
    if q.target != TypeTarget::Rel {
        for e in &m.entity_types {
            if name_matches(&q.name, &e.name) {
                candidates.push((SchemaTypeKind::Entity, &e.name, &e.variations));
            }
        }
    }
    if q.target != TypeTarget::Entity {
        for r in &m.relationship_types {
            let featuring = m.entity_types.iter().any(|e| {
                e.variations.iter().any(|v| {
                    v.features.iter().any(|f| match f {
                        Feature::Reference(rf) => {
                            name_matches(&q.name, &rf.target)
                                && rf.featured_by.iter().any(|fb| fb.relationship_type == r.name)
                        }
                        _ => false,
                    })
                })
            });
            if name_matches(&q.name, &r.name) || featuring {
                candidates.push((SchemaTypeKind::Relationship, &r.name, &r.variations));
            }
        }
    }
    for (kind, name, vars) in candidates {
        let vs: Vec<StructuralVariation> = vars
            .iter()
            .filter(|v| passes(q.filter.as_ref(), v, vars))
            .cloned()
            .collect();
        if !vs.is_empty() {
            selected.push((kind, name.to_string(), vs));
        }
    }
    let mut timeline = false;
    for op in &q.operations {
        if selected.is_empty() {
            break;
        }
        match op {
            Operation::Keys => {
                for (_, _, vs) in selected.iter_mut() {
                    *vs = vs.iter().filter_map(keys_only).collect();
                }
            }
            Operation::History(i) => {
                if !selected.iter().any(|(_, _, vs)| vs.iter().any(|v| v.first_seen.is_some())) {
                    return Outcome::HistoryUnavailable;
                }
                for (_, _, vs) in selected.iter_mut() {
                    vs.retain(|v| matches!(v.first_seen, Some(d) if in_interval(i, d)));
                }
                timeline = true;
            }
        }
        selected.retain(|(_, _, vs)| !vs.is_empty());
    }
    let mut acc = Acc::default();
    for (kind, name, vs) in &selected {
        for v in vs {
            acc.var_with(*kind, name, v);
        }
    }
    if q.union {
        acc = acc.union(m);
        timeline = false;
    }
    Outcome::Result(acc.shape(timeline))
}

// ---- relationship queries ----

struct Final {
    vars: Vec<u32>,
    featuring: Vec<(String, u32)>,
}

fn final_ok(m: &USchemaModel, f: &Feature, spec: &TargetSpec) -> Option<Final> {
    let kind = spec.kind.unwrap_or(RelKind::Any);
    let is_aggr = matches!(f, Feature::Aggregate(_));
    let is_ref = matches!(f, Feature::Reference(_));
    let kind_ok = match kind {
        RelKind::Any => is_aggr || is_ref,
        RelKind::Aggr => is_aggr,
        RelKind::Ref => is_ref,
    };
    if !kind_ok {
        return None;
    }
    if let Some(n) = &spec.feature {
        if n.to_lowercase() != f.name().to_lowercase() {
            return None;
        }
    }
    let target = f.target()?;
    if !name_matches(&spec.name, target) {
        return None;
    }
    let tvars = &m.entity_types.iter().find(|e| e.name == target)?.variations;
    let ok = |v: &StructuralVariation| passes(spec.target_filter.as_ref(), v, tvars);
    match f {
        Feature::Aggregate(a) => {
            let vars: Vec<u32> = a
                .target_variation_ids
                .iter()
                .copied()
                .filter(|id| tvars.iter().any(|v| v.id == *id && ok(v)))
                .collect();
            if vars.is_empty() {
                None
            } else {
                Some(Final { vars, featuring: vec![] })
            }
        }
        Feature::Reference(r) => {
            let mut vars = vec![];
            if spec.target_filter.is_some() {
                vars = tvars.iter().filter(|v| ok(v)).map(|v| v.id).collect();
                if vars.is_empty() {
                    return None;
                }
            }
            let mut featuring = vec![];
            for fb in &r.featured_by {
                let keep = match &spec.ref_filter {
                    None => true,
                    Some(filter) => {
                        let rvars = variations_of(m, SchemaTypeKind::Relationship, &fb.relationship_type);
                        rvars
                            .iter()
                            .any(|v| v.id == fb.variation && passes(Some(filter), v, rvars))
                    }
                };
                if keep {
                    featuring.push((fb.relationship_type.clone(), fb.variation));
                }
            }
            if spec.ref_filter.is_some() && featuring.is_empty() {
                return None;
            }
            Some(Final { vars, featuring })
        }
        _ => None,
    }
}

fn record_final(m: &USchemaModel, acc: &mut Acc, from: &str, f: &Feature, fin: &Final) {
    match f {
        Feature::Aggregate(a) => {
            for &id in &fin.vars {
                let to = acc.var(m, SchemaTypeKind::Entity, &a.target, id);
                Acc::edge(&mut acc.aggregations, (from.to_string(), a.name.clone(), to), card(a.cardinality));
            }
        }
        Feature::Reference(r) => {
            let to = acc.whole(&r.target);
            Acc::edge(&mut acc.references, (from.to_string(), r.name.clone(), to), card(r.cardinality));
            for &id in &fin.vars {
                acc.var(m, SchemaTypeKind::Entity, &r.target, id);
            }
            for (rt, id) in &fin.featuring {
                let to = acc.var(m, SchemaTypeKind::Relationship, rt, *id);
                acc.featuring.insert((from.to_string(), r.name.clone(), to));
            }
        }
        _ => {}
    }
}

/// One hop of a walk: from a variation along a feature into a variation.
#[derive(Clone)]
struct Hop<'m> {
    from: (&'m str, u32),
    feature: &'m Feature,
    to: (&'m str, u32),
}

fn entity_vars<'m>(m: &'m USchemaModel, t: &str) -> &'m [StructuralVariation] {
    variations_of(m, SchemaTypeKind::Entity, t)
}

fn next_hops<'m>(m: &'m USchemaModel, at: (&'m str, u32)) -> Vec<Hop<'m>> {
    let v = entity_vars(m, at.0).iter().find(|v| v.id == at.1).unwrap();
    let mut out = vec![];
    for f in &v.features {
        match f {
            Feature::Aggregate(a) => {
                for &id in &a.target_variation_ids {
                    let t = m.entity_types.iter().find(|e| e.name == a.target).unwrap();
                    out.push(Hop { from: at, feature: f, to: (&t.name, id) });
                }
            }
            Feature::Reference(r) => {
                let t = m.entity_types.iter().find(|e| e.name == r.target).unwrap();
                for v in &t.variations {
                    out.push(Hop { from: at, feature: f, to: (&t.name, v.id) });
                }
            }
            _ => {}
        }
    }
    out
}

fn record_hop(m: &USchemaModel, acc: &mut Acc, h: &Hop<'_>) {
    let from = acc.var(m, SchemaTypeKind::Entity, h.from.0, h.from.1);
    match h.feature {
        Feature::Aggregate(a) => {
            let to = acc.var(m, SchemaTypeKind::Entity, h.to.0, h.to.1);
            Acc::edge(&mut acc.aggregations, (from, a.name.clone(), to), card(a.cardinality));
        }
        Feature::Reference(r) => {
            let t = acc.whole(&r.target);
            Acc::edge(&mut acc.references, (from.clone(), r.name.clone(), t), card(r.cardinality));
            for fb in &r.featured_by {
                let rv = acc.var(m, SchemaTypeKind::Relationship, &fb.relationship_type, fb.variation);
                acc.featuring.insert((from.clone(), r.name.clone(), rv));
            }
            acc.var(m, SchemaTypeKind::Entity, h.to.0, h.to.1);
        }
        _ => {}
    }
}

/// Longest walk the enumerator was asked to consider, across all calls.
pub static DEEPEST: std::sync::atomic::AtomicUsize = std::sync::atomic::AtomicUsize::new(0);

fn walks(m: &USchemaModel, start: (&str, u32), spec: &TargetSpec, acc: &mut Acc) -> bool {
    // Target types some walk can reach at all.
    let mut reach: BTreeSet<(&str, u32)> = BTreeSet::from([start]);
    let mut frontier = vec![start];
    while let Some(s) = frontier.pop() {
        for h in next_hops(m, s) {
            if reach.insert(h.to) {
                frontier.push(h.to);
            }
        }
    }
    let mut needed: BTreeSet<String> = BTreeSet::new();
    for &(t, id) in &reach {
        let v = entity_vars(m, t).iter().find(|v| v.id == id).unwrap();
        for f in &v.features {
            if final_ok(m, f, spec).is_some() {
                needed.insert(f.target().unwrap().to_string());
            }
        }
    }
    if needed.is_empty() {
        return false;
    }

    let mut found: BTreeSet<String> = BTreeSet::new();
    let mut length = 1;
    while found != needed {
        DEEPEST.fetch_max(length, std::sync::atomic::Ordering::Relaxed);
        let mut now: BTreeSet<String> = BTreeSet::new();
        let mut prefix: Vec<Hop<'_>> = Vec::new();
        enumerate(m, spec, start, length - 1, &mut prefix, &found, &mut now, acc);
        found.extend(now);
        length += 1;
        assert!(length < 64, "walk enumeration did not terminate");
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn enumerate<'m>(
    m: &'m USchemaModel,
    spec: &TargetSpec,
    at: (&'m str, u32),
    remaining: usize,
    prefix: &mut Vec<Hop<'m>>,
    done: &BTreeSet<String>,
    now: &mut BTreeSet<String>,
    acc: &mut Acc,
) {
    if remaining == 0 {
        let v = entity_vars(m, at.0).iter().find(|v| v.id == at.1).unwrap();
        for f in &v.features {
            let Some(fin) = final_ok(m, f, spec) else { continue };
            let target = f.target().unwrap();
            if done.contains(target) {
                continue;
            }
            now.insert(target.to_string());
            for h in prefix.iter() {
                record_hop(m, acc, h);
            }
            let from = acc.var(m, SchemaTypeKind::Entity, at.0, at.1);
            record_final(m, acc, &from, f, &fin);
        }
        return;
    }
    for h in next_hops(m, at) {
        let to = h.to;
        prefix.push(h);
        enumerate(m, spec, to, remaining - 1, prefix, done, now, acc);
        prefix.pop();
    }
}

fn rel_query(m: &USchemaModel, q: &RelQuery) -> Outcome {
    let any = TargetSpec {
        indirect: false,
        name: NameSpec::All,
        target_filter: None,
        kind: None,
        feature: None,
        ref_filter: None,
    };
    let specs: Vec<&TargetSpec> = q
        .to
        .iter()
        .map(|s| match s {
            RelSpec::NoTarget => &any,
            RelSpec::Target(t) => t,
        })
        .collect();
    let mut acc = Acc::default();
    for e in &m.entity_types {
        let (name_ok, filter) = match &q.from {
            FromClause::Empty => (true, None),
            FromClause::Type { name, filter } => (name_matches(name, &e.name), filter.as_ref()),
        };
        if !name_ok {
            continue;
        }
        for v in &e.variations {
            if !passes(filter, v, &e.variations) {
                continue;
            }
            let mut local = Acc::default();
            let mut all = true;
            for spec in &specs {
                let found = if spec.indirect {
                    walks(m, (&e.name, v.id), spec, &mut local)
                } else {
                    let from = key_string(SchemaTypeKind::Entity, &e.name, &format!("[{}]", v.id));
                    let mut found = false;
                    for f in &v.features {
                        if let Some(fin) = final_ok(m, f, spec) {
                            record_final(m, &mut local, &from, f, &fin);
                            found = true;
                        }
                    }
                    found
                };
                if !found {
                    all = false;
                    break;
                }
            }
            if all {
                local.var_with(SchemaTypeKind::Entity, &e.name, v);
                acc.absorb(local);
            }
        }
    }
    if q.union {
        acc = acc.union(m);
    }
    Outcome::Result(acc.shape(false))
}

pub fn evaluate(m: &USchemaModel, q: &Query) -> Outcome {
    match q {
        Query::Type(q) => type_query(m, q),
        Query::Rel(q) => rel_query(m, q),
    }
}
