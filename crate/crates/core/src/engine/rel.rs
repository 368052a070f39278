use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::model::{
    feature_classes, Feature, FeaturingRef, SchemaTypeKind, StructuralVariation, USchemaModel,
};
use crate::syntax::{
    unparse, unparse_name_spec, FromClause, NameSpec, Query, RelKind, RelQuery, RelSpec,
    TargetSpec,
};

use super::result::Builder;
use super::{match_name, match_variation, EngineError, NodeKey, Options, QueryResult};

/// What a single relationship feature contributes to a result.
#[derive(Debug, Clone)]
pub(crate) struct Hop {
    /// Aggregates: target variations drawn as edge ends. References:
    /// target variations shown next to the whole-type node.
    pub target_vars: Vec<u32>,
    /// References: relationship-type variations linked by featuring edges.
    pub featuring: Vec<FeaturingRef>,
}

impl Hop {
    pub fn unconstrained(f: &Feature) -> Hop {
        match f {
            Feature::Aggregate(a) => Hop {
                target_vars: a.target_variation_ids.clone(),
                featuring: vec![],
            },
            Feature::Reference(r) => Hop {
                target_vars: vec![],
                featuring: r.featured_by.clone(),
            },
            _ => Hop {
                target_vars: vec![],
                featuring: vec![],
            },
        }
    }
}

pub(crate) fn record_hop(
    model: &USchemaModel,
    b: &mut Builder,
    from: &NodeKey,
    f: &Feature,
    hop: &Hop,
) {
    match f {
        Feature::Aggregate(a) => {
            for &id in &hop.target_vars {
                let to = b.add_variation(model, SchemaTypeKind::Entity, &a.target, id);
                b.add_aggregation(from.clone(), &a.name, a.cardinality, to);
            }
        }
        Feature::Reference(r) => {
            let to = b.add_type(&r.target);
            b.add_reference(from.clone(), &r.name, r.cardinality, to);
            for &id in &hop.target_vars {
                b.add_variation(model, SchemaTypeKind::Entity, &r.target, id);
            }
            for fb in &hop.featuring {
                let rv = b.add_variation(
                    model,
                    SchemaTypeKind::Relationship,
                    &fb.relationship_type,
                    fb.variation,
                );
                b.add_featuring(from.clone(), &r.name, rv);
            }
        }
        Feature::Attribute(_) | Feature::Key(_) => {}
    }
}

/// Whether `f` satisfies a target spec as the last step of a path, and what
/// it contributes if so.
pub(crate) fn match_hop(model: &USchemaModel, f: &Feature, spec: &TargetSpec) -> Option<Hop> {
    match (spec.effective_kind(), f) {
        (RelKind::Any, Feature::Aggregate(_) | Feature::Reference(_))
        | (RelKind::Aggr, Feature::Aggregate(_))
        | (RelKind::Ref, Feature::Reference(_)) => {}
        _ => return None,
    }
    if let Some(name) = &spec.feature {
        if !f.name().eq_ignore_ascii_case(name) {
            return None;
        }
    }
    let target_name = f.target()?;
    if !match_name(&spec.name, target_name) {
        return None;
    }
    let target = model.entity_type(target_name)?;
    let classes = feature_classes(target);
    let passes = |v: &StructuralVariation| match_variation(spec.target_filter.as_ref(), v, &classes);
    match f {
        Feature::Aggregate(a) => {
            let target_vars: Vec<u32> = a
                .target_variation_ids
                .iter()
                .copied()
                .filter(|&id| target.variations.iter().any(|v| v.id == id && passes(v)))
                .collect();
            (!target_vars.is_empty()).then_some(Hop {
                target_vars,
                featuring: vec![],
            })
        }
        Feature::Reference(r) => {
            let target_vars: Vec<u32> = if spec.target_filter.is_some() {
                let ids: Vec<u32> = target.variations.iter().filter(|v| passes(v)).map(|v| v.id).collect();
                if ids.is_empty() {
                    return None;
                }
                ids
            } else {
                vec![]
            };
            let featuring: Vec<FeaturingRef> = match &spec.ref_filter {
                None => r.featured_by.clone(),
                Some(filter) => {
                    let kept: Vec<FeaturingRef> = r
                        .featured_by
                        .iter()
                        .filter(|fb| {
                            model.relationship_type(&fb.relationship_type).is_some_and(|rt| {
                                let classes = feature_classes(rt);
                                rt.variations
                                    .iter()
                                    .any(|v| v.id == fb.variation && match_variation(Some(filter), v, &classes))
                            })
                        })
                        .cloned()
                        .collect();
                    if kept.is_empty() {
                        return None;
                    }
                    kept
                }
            };
            Some(Hop {
                target_vars,
                featuring,
            })
        }
        Feature::Attribute(_) | Feature::Key(_) => None,
    }
}

/// A place a path can be at: a variation of an entity type, or an entity
/// type as a whole right after following a reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum State<'m> {
    Var(&'m str, u32),
    Type(&'m str),
}

/// One move: a feature hop (weight 1) or entering a variation of a type
/// reached by reference (weight 0).
#[derive(Debug, Clone, Copy)]
struct Step<'m> {
    feature: Option<&'m Feature>,
    to: State<'m>,
}

fn variation<'m>(model: &'m USchemaModel, t: &str, id: u32) -> Option<&'m StructuralVariation> {
    model.entity_type(t)?.variations.iter().find(|v| v.id == id)
}

fn steps<'m>(model: &'m USchemaModel, s: State<'m>) -> Vec<Step<'m>> {
    let mut out = Vec::new();
    match s {
        State::Var(t, id) => {
            let Some(v) = variation(model, t, id) else { return out };
            for f in v.relationships() {
                match f {
                    Feature::Aggregate(a) => {
                        for &tid in &a.target_variation_ids {
                            if variation(model, &a.target, tid).is_some() {
                                out.push(Step {
                                    feature: Some(f),
                                    to: State::Var(&a.target, tid),
                                });
                            }
                        }
                    }
                    Feature::Reference(r) => {
                        if model.entity_type(&r.target).is_some() {
                            out.push(Step {
                                feature: Some(f),
                                to: State::Type(&r.target),
                            });
                        }
                    }
                    Feature::Attribute(_) | Feature::Key(_) => {}
                }
            }
        }
        State::Type(t) => {
            if let Some(e) = model.entity_type(t) {
                for v in &e.variations {
                    out.push(Step {
                        feature: None,
                        to: State::Var(&e.name, v.id),
                    });
                }
            }
        }
    }
    out
}

/// A final hop that satisfies a target spec.
struct Candidate<'m> {
    from: State<'m>,
    feature: &'m Feature,
    hop: Hop,
    target: &'m str,
}

fn final_hops<'m>(model: &'m USchemaModel, s: State<'m>, spec: &TargetSpec) -> Vec<Candidate<'m>> {
    let State::Var(t, id) = s else { return vec![] };
    let Some(v) = variation(model, t, id) else { return vec![] };
    let mut out = Vec::new();
    for f in v.relationships() {
        let Some(hop) = match_hop(model, f, spec) else { continue };
        let target = f.target().expect("relationship features have targets");
        match f {
            Feature::Aggregate(_) => {
                for &tid in &hop.target_vars {
                    out.push(Candidate {
                        from: s,
                        feature: f,
                        hop: Hop {
                            target_vars: vec![tid],
                            featuring: vec![],
                        },
                        target,
                    });
                }
            }
            _ => out.push(Candidate {
                from: s,
                feature: f,
                hop,
                target,
            }),
        }
    }
    out
}

fn arrival<'m>(c: &Candidate<'m>) -> State<'m> {
    match c.feature {
        Feature::Aggregate(_) => State::Var(c.target, c.hop.target_vars[0]),
        _ => State::Type(c.target),
    }
}

fn key_of(s: State<'_>) -> NodeKey {
    match s {
        State::Var(t, id) => NodeKey::variation(SchemaTypeKind::Entity, t, id),
        State::Type(t) => NodeKey::entity_type(t),
    }
}

/// Records an intermediate move of a path.
fn record_step(model: &USchemaModel, b: &mut Builder, from: State<'_>, step: &Step<'_>) {
    match (step.feature, step.to) {
        (Some(f), to) => {
            let hop = match (f, to) {
                (Feature::Aggregate(_), State::Var(_, id)) => Hop {
                    target_vars: vec![id],
                    featuring: vec![],
                },
                _ => Hop::unconstrained(f),
            };
            record_hop(model, b, &key_of(from), f, &hop);
        }
        (None, State::Var(t, id)) => {
            b.add_variation(model, SchemaTypeKind::Entity, t, id);
        }
        (None, State::Type(_)) => {}
    }
}

fn record_candidate(model: &USchemaModel, b: &mut Builder, c: &Candidate<'_>) {
    record_hop(model, b, &key_of(c.from), c.feature, &c.hop);
}

/// Shortest paths from `start` to every entity type reachable through a
/// final hop satisfying `spec`; all shortest paths per target type are kept.
fn shortest<'m>(
    model: &'m USchemaModel,
    start: State<'m>,
    spec: &TargetSpec,
    b: &mut Builder,
) -> bool {
    let mut dist: BTreeMap<State<'m>, u32> = BTreeMap::new();
    let mut queue = VecDeque::new();
    dist.insert(start, 0);
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for step in steps(model, s) {
            let w = u32::from(step.feature.is_some());
            if dist.get(&step.to).is_none_or(|&old| d + w < old) {
                dist.insert(step.to, d + w);
                if w == 0 {
                    queue.push_front(step.to);
                } else {
                    queue.push_back(step.to);
                }
            }
        }
    }

    let mut preds: BTreeMap<State<'m>, Vec<(State<'m>, Step<'m>)>> = BTreeMap::new();
    for (&s, &d) in &dist {
        for step in steps(model, s) {
            let w = u32::from(step.feature.is_some());
            if dist.get(&step.to) == Some(&(d + w)) && step.to != start {
                preds.entry(step.to).or_default().push((s, step));
            }
        }
    }

    let mut best: BTreeMap<&str, (u32, Vec<Candidate<'m>>)> = BTreeMap::new();
    for (&s, &d) in &dist {
        for c in final_hops(model, s, spec) {
            let len = d + 1;
            let entry = best.entry(c.target).or_insert((len, vec![]));
            if len < entry.0 {
                *entry = (len, vec![]);
            }
            if len == entry.0 {
                entry.1.push(c);
            }
        }
    }
    if best.is_empty() {
        return false;
    }

    let mut seen = BTreeSet::new();
    let mut stack = Vec::new();
    for (_, candidates) in best.values() {
        for c in candidates {
            record_candidate(model, b, c);
            if seen.insert(c.from) {
                stack.push(c.from);
            }
        }
    }
    while let Some(x) = stack.pop() {
        for (p, step) in preds.get(&x).into_iter().flatten() {
            record_step(model, b, *p, step);
            if seen.insert(*p) {
                stack.push(*p);
            }
        }
    }
    true
}

/// Every simple path from `start` ending in a final hop satisfying `spec`.
fn all_simple<'m>(
    model: &'m USchemaModel,
    start: State<'m>,
    spec: &TargetSpec,
    b: &mut Builder,
) -> bool {
    fn walk<'m>(
        model: &'m USchemaModel,
        spec: &TargetSpec,
        path: &mut Vec<(State<'m>, Step<'m>)>,
        on_path: &mut BTreeSet<State<'m>>,
        at: State<'m>,
        b: &mut Builder,
        found: &mut bool,
    ) {
        for c in final_hops(model, at, spec) {
            if on_path.contains(&arrival(&c)) {
                continue;
            }
            *found = true;
            for (from, step) in path.iter() {
                record_step(model, b, *from, step);
            }
            record_candidate(model, b, &c);
        }
        for step in steps(model, at) {
            if on_path.contains(&step.to) {
                continue;
            }
            on_path.insert(step.to);
            path.push((at, step));
            walk(model, spec, path, on_path, step.to, b, found);
            path.pop();
            on_path.remove(&step.to);
        }
    }
    let mut found = false;
    let mut on_path = BTreeSet::from([start]);
    walk(model, spec, &mut Vec::new(), &mut on_path, start, b, &mut found);
    found
}

fn any_target() -> TargetSpec {
    TargetSpec {
        indirect: false,
        name: NameSpec::All,
        target_filter: None,
        kind: None,
        feature: None,
        ref_filter: None,
    }
}

pub(crate) fn run(model: &USchemaModel, q: &RelQuery, options: Options) -> Result<QueryResult, EngineError> {
    let all = NameSpec::All;
    let (from_name, from_filter) = match &q.from {
        FromClause::Empty => (&all, None),
        FromClause::Type { name, filter } => (name, filter.as_ref()),
    };
    let specs: Vec<TargetSpec> = q
        .to
        .iter()
        .map(|s| match s {
            RelSpec::NoTarget => any_target(),
            RelSpec::Target(t) => t.clone(),
        })
        .collect();

    let mut b = Builder::default();
    for e in model.entity_types.iter().filter(|e| match_name(from_name, &e.name)) {
        let classes = feature_classes(e);
        for v in e.variations.iter().filter(|v| match_variation(from_filter, v, &classes)) {
            let start = State::Var(&e.name, v.id);
            let from = key_of(start);
            let mut local = Builder::default();
            let mut all_found = true;
            for spec in &specs {
                let found = if spec.indirect {
                    if options.all_paths {
                        all_simple(model, start, spec, &mut local)
                    } else {
                        shortest(model, start, spec, &mut local)
                    }
                } else {
                    let mut found = false;
                    for f in v.relationships() {
                        if let Some(hop) = match_hop(model, f, spec) {
                            record_hop(model, &mut local, &from, f, &hop);
                            found = true;
                        }
                    }
                    found
                };
                if !found {
                    all_found = false;
                    break;
                }
            }
            if all_found {
                local.add_variation(model, SchemaTypeKind::Entity, &e.name, v.id);
                b.merge(local);
            }
        }
    }
    if q.union {
        b = b.unionize(model)?;
    }
    let message = empty_message(q);
    Ok(b.finish(model, Some(message), false))
}

fn empty_message(q: &RelQuery) -> String {
    let targets: Vec<String> = q
        .to
        .iter()
        .filter_map(|s| match s {
            RelSpec::Target(t) => Some(unparse_name_spec(&t.name)),
            RelSpec::NoTarget => None,
        })
        .collect();
    let no_target = targets.len() < q.to.len();
    match &q.from {
        FromClause::Empty if !no_target => {
            format!("{} is not target type of any relationship", targets.join(", "))
        }
        FromClause::Type { name, .. } if no_target => {
            format!("{} is not source type of any relationship", unparse_name_spec(name))
        }
        _ => {
            let text = unparse(&Query::Rel(RelQuery {
                union: false,
                ..q.clone()
            }));
            let body = text.trim_start_matches("FROM ");
            match body.split_once(" TO ") {
                Some((from, to)) => format!("no relationship from {from} satisfies TO {to}"),
                None => format!("no relationship satisfies `{text}`"),
            }
        }
    }
}
