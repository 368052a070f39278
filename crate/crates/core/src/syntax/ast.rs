use chrono::NaiveDate;

use crate::model::FeatureClass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Query {
    Type(TypeQuery),
    Rel(RelQuery),
}

impl Query {
    pub fn is_union(&self) -> bool {
        match self {
            Query::Type(q) => q.union,
            Query::Rel(q) => q.union,
        }
    }

    pub fn set_union(&mut self, union: bool) {
        match self {
            Query::Type(q) => q.union = union,
            Query::Rel(q) => q.union = union,
        }
    }
}

/// `[UNION] (ENTITY | REL | ANY) <name> [<filter>] [<operations>]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeQuery {
    pub union: bool,
    pub target: TypeTarget,
    pub name: NameSpec,
    pub filter: Option<VariationFilter>,
    pub operations: Vec<Operation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeTarget {
    Entity,
    Rel,
    Any,
}

/// How a schema type name is matched.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NameSpec {
    Exact(String),
    /// `stem*`
    Prefix(String),
    /// `*stem`
    Suffix(String),
    /// `*stem*`
    Contains(String),
    /// `*`
    All,
    /// `r"pattern"`, matched against the whole name.
    Regex(String),
}

/// `[f1, f2, ...]`: features a variation must have.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariationFilter {
    pub features: Vec<FeatureSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpec {
    pub class: Option<FeatureClass>,
    pub name: String,
    /// `None` when no `:` follows the name.
    pub type_spec: Option<FeatureTypeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeatureTypeSpec {
    Attribute(AttributeTypeSpec),
    /// `AGGR<T>`, or bare `AGGR` for any target.
    Aggr(Option<String>),
    /// `REF<T>`, or bare `REF` for any target.
    Ref(Option<String>),
    /// `?`
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicType {
    Number,
    String,
    Boolean,
}

/// A basic type together with how it was spelled (`number` or `Number`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasicTypeSpec {
    pub ty: BasicType,
    pub capitalized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeTypeSpec {
    Basic(BasicTypeSpec),
    /// `t[]`
    Array(Box<AttributeTypeSpec>),
    Set(Box<AttributeTypeSpec>),
    List(Box<AttributeTypeSpec>),
    Tuple(Vec<AttributeTypeSpec>),
    Map(BasicTypeSpec, Box<AttributeTypeSpec>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    Keys,
    History(Interval),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    Before(NaiveDate),
    After(NaiveDate),
    /// Inclusive on both ends.
    Between(NaiveDate, NaiveDate),
}

impl Interval {
    pub fn contains(&self, date: NaiveDate) -> bool {
        match *self {
            Interval::Before(d) => date < d,
            Interval::After(d) => date > d,
            Interval::Between(a, b) => a <= date && date <= b,
        }
    }
}

/// `[UNION] FROM <from> TO <rel-spec> {, <rel-spec>}`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelQuery {
    pub union: bool,
    pub from: FromClause,
    pub to: Vec<RelSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FromClause {
    /// `_`
    Empty,
    Type {
        name: NameSpec,
        filter: Option<VariationFilter>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelSpec {
    /// `_`
    NoTarget,
    Target(TargetSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    /// `>>`: reachable through any chain of aggregates and references.
    pub indirect: bool,
    pub name: NameSpec,
    pub target_filter: Option<VariationFilter>,
    /// `None` when no kind keyword was written; behaves as `ANY`.
    pub kind: Option<RelKind>,
    pub feature: Option<String>,
    /// Filter over the relationship-type variations featuring a reference.
    pub ref_filter: Option<VariationFilter>,
}

impl TargetSpec {
    pub fn effective_kind(&self) -> RelKind {
        self.kind.unwrap_or(RelKind::Any)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelKind {
    Ref,
    Aggr,
    Any,
}
