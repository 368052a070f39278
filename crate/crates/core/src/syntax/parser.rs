use std::collections::HashSet;

use chrono::NaiveDate;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::SyntaxError;
use crate::model::FeatureClass;

/// Parses a token stream produced by [`tokenize`] into a query.
pub fn parse(tokens: &[Token]) -> Result<Query, SyntaxError> {
    let mut p = Parser::new(tokens);
    let q = p.query()?;
    if p.peek().is_some() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(q)
}

/// Parses a standalone type-name spec such as `User`, `*_id` or `r"M.*"`.
pub fn parse_name_spec(text: &str) -> Result<NameSpec, SyntaxError> {
    let tokens = tokenize(text)?;
    let mut p = Parser::new(&tokens);
    let spec = p.name_spec()?;
    if p.peek().is_some() {
        return Err(p.unexpected(&["end of input"]));
    }
    Ok(spec)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    /// Second half of a `>>` token read as two closing angle brackets.
    pending_gt: bool,
}

const NAME_START: &[&str] = &["identifier", "`*`", "regular expression"];

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Parser {
            tokens,
            pos: 0,
            pending_gt: false,
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        if self.pending_gt {
            return Some(TokenKind::Gt);
        }
        self.peek().map(|t| t.kind)
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek_kind() == Some(kind)
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: TokenKind) -> Option<&'a Token> {
        if !self.pending_gt && self.at(kind) {
            Some(self.bump())
        } else {
            None
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<&'a Token, SyntaxError> {
        self.eat(kind)
            .ok_or_else(|| self.unexpected(&[kind.describe()]))
    }

    fn position(&self) -> (usize, usize) {
        match (self.peek(), self.tokens.last()) {
            (Some(t), _) => (t.line, t.column),
            (None, Some(last)) => (last.end_line, last.end_column),
            (None, None) => (1, 1),
        }
    }

    fn unexpected(&self, expected: &[&str]) -> SyntaxError {
        let (line, column) = self.position();
        let found = match self.peek() {
            None => "end of input".to_string(),
            Some(t) if t.kind == TokenKind::Regex => format!("regular expression r\"{}\"", t.lexeme),
            Some(t) => format!("`{}`", t.lexeme),
        };
        SyntaxError::Parse {
            line,
            column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn invalid(token: &Token, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Invalid {
            line: token.line,
            column: token.column,
            message: message.into(),
        }
    }

    fn query(&mut self) -> Result<Query, SyntaxError> {
        let union = self.eat(TokenKind::KwUnion).is_some();
        let mut q = match self.peek_kind() {
            Some(TokenKind::KwEntity | TokenKind::KwRel | TokenKind::KwAny) => {
                Query::Type(self.type_query()?)
            }
            Some(TokenKind::KwFrom) => Query::Rel(self.rel_query()?),
            _ => {
                let mut expected = vec!["ENTITY", "REL", "ANY", "FROM"];
                if !union {
                    expected.insert(0, "UNION");
                }
                return Err(self.unexpected(&expected));
            }
        };
        q.set_union(union);
        Ok(q)
    }

    fn type_query(&mut self) -> Result<TypeQuery, SyntaxError> {
        let target = match self.bump().kind {
            TokenKind::KwEntity => TypeTarget::Entity,
            TokenKind::KwRel => TypeTarget::Rel,
            _ => TypeTarget::Any,
        };
        let name = self.name_spec()?;
        let filter = self.opt_filter()?;
        let mut operations = Vec::new();
        if self.at(TokenKind::KwKeys) || self.at(TokenKind::KwHistory) {
            loop {
                let Some(start) = self.peek() else {
                    return Err(self.unexpected(&["keys", "history"]));
                };
                let op = self.operation()?;
                if operations
                    .iter()
                    .any(|o| std::mem::discriminant(o) == std::mem::discriminant(&op))
                {
                    return Err(Self::invalid(start, format!("`{}` given twice", start.lexeme)));
                }
                operations.push(op);
                if self.eat(TokenKind::Comma).is_none() {
                    break;
                }
            }
        }
        Ok(TypeQuery {
            union: false,
            target,
            name,
            filter,
            operations,
        })
    }

    fn operation(&mut self) -> Result<Operation, SyntaxError> {
        if self.eat(TokenKind::KwKeys).is_some() {
            return Ok(Operation::Keys);
        }
        if self.eat(TokenKind::KwHistory).is_none() {
            return Err(self.unexpected(&["keys", "history"]));
        }
        let interval = match self.peek_kind() {
            Some(TokenKind::KwBefore) => {
                self.bump();
                Interval::Before(self.date()?.1)
            }
            Some(TokenKind::KwAfter) => {
                self.bump();
                Interval::After(self.date()?.1)
            }
            Some(TokenKind::KwBetween) => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let (first, a) = self.date()?;
                self.expect(TokenKind::Comma)?;
                let (_, b) = self.date()?;
                self.expect(TokenKind::RParen)?;
                if a > b {
                    return Err(Self::invalid(
                        first,
                        format!("interval starts after it ends ({a} > {b})"),
                    ));
                }
                Interval::Between(a, b)
            }
            _ => return Err(self.unexpected(&["before", "after", "between"])),
        };
        Ok(Operation::History(interval))
    }

    fn date(&mut self) -> Result<(&'a Token, NaiveDate), SyntaxError> {
        let t = self.expect(TokenKind::Date)?;
        let d = NaiveDate::parse_from_str(&t.lexeme, "%Y-%m-%d")
            .map_err(|_| Self::invalid(t, format!("`{}` is not a calendar date", t.lexeme)))?;
        Ok((t, d))
    }

    fn rel_query(&mut self) -> Result<RelQuery, SyntaxError> {
        self.expect(TokenKind::KwFrom)?;
        let from = if self.eat(TokenKind::Underscore).is_some() {
            FromClause::Empty
        } else {
            let name = self.name_spec_or(&["identifier", "`*`", "regular expression", "`_`"])?;
            FromClause::Type {
                name,
                filter: self.opt_filter()?,
            }
        };
        if !self.at(TokenKind::KwTo) {
            let expected: &[&str] = match from {
                FromClause::Type { filter: None, .. } => &["`[`", "TO"],
                _ => &["TO"],
            };
            return Err(self.unexpected(expected));
        }
        self.bump();
        let mut to = vec![self.rel_spec()?];
        while self.eat(TokenKind::Comma).is_some() {
            to.push(self.rel_spec()?);
        }
        Ok(RelQuery {
            union: false,
            from,
            to,
        })
    }

    fn rel_spec(&mut self) -> Result<RelSpec, SyntaxError> {
        if self.eat(TokenKind::Underscore).is_some() {
            return Ok(RelSpec::NoTarget);
        }
        let indirect = self.eat(TokenKind::Indirect).is_some();
        let name = if indirect {
            self.name_spec()?
        } else {
            self.name_spec_or(&["identifier", "`*`", "regular expression", "`>>`", "`_`"])?
        };
        let target_filter = self.opt_filter()?;
        let kind = match self.peek_kind() {
            Some(TokenKind::KwRef) => Some(RelKind::Ref),
            Some(TokenKind::KwAggr) => Some(RelKind::Aggr),
            Some(TokenKind::KwAny) => Some(RelKind::Any),
            _ => None,
        };
        let mut feature = None;
        let mut ref_filter = None;
        if kind.is_some() {
            self.bump();
            if let Some(t) = self.eat(TokenKind::Ident) {
                feature = Some(t.lexeme.clone());
            }
            if self.at(TokenKind::LBracket) {
                let t = self.peek().expect("checked above");
                if kind != Some(RelKind::Ref) {
                    return Err(Self::invalid(
                        t,
                        "a relationship filter is only allowed after REF",
                    ));
                }
                ref_filter = self.opt_filter()?;
            }
        }
        Ok(RelSpec::Target(TargetSpec {
            indirect,
            name,
            target_filter,
            kind,
            feature,
            ref_filter,
        }))
    }

    fn name_spec(&mut self) -> Result<NameSpec, SyntaxError> {
        self.name_spec_or(NAME_START)
    }

    fn name_spec_or(&mut self, expected: &[&str]) -> Result<NameSpec, SyntaxError> {
        let adjacent = |a: &Token, b: Option<&Token>| b.is_some_and(|b| b.start == a.end);
        match self.peek_kind() {
            Some(TokenKind::Ident) => {
                let t = self.bump();
                let next = self.peek();
                if next.is_some_and(|n| n.kind == TokenKind::Star) && adjacent(t, next) {
                    self.bump();
                    Ok(NameSpec::Prefix(t.lexeme.clone()))
                } else {
                    Ok(NameSpec::Exact(t.lexeme.clone()))
                }
            }
            Some(TokenKind::Star) => {
                let star = self.bump();
                let next = self.peek();
                if !(next.is_some_and(|n| n.kind == TokenKind::Ident) && adjacent(star, next)) {
                    return Ok(NameSpec::All);
                }
                let stem = self.bump();
                let next = self.peek();
                if next.is_some_and(|n| n.kind == TokenKind::Star) && adjacent(stem, next) {
                    self.bump();
                    Ok(NameSpec::Contains(stem.lexeme.clone()))
                } else {
                    Ok(NameSpec::Suffix(stem.lexeme.clone()))
                }
            }
            Some(TokenKind::Regex) => {
                let t = self.bump();
                crate::engine::compile_name_regex(&t.lexeme).map_err(|e| {
                    Self::invalid(t, format!("invalid regular expression: {e}"))
                })?;
                Ok(NameSpec::Regex(t.lexeme.clone()))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn opt_filter(&mut self) -> Result<Option<VariationFilter>, SyntaxError> {
        if self.eat(TokenKind::LBracket).is_none() {
            return Ok(None);
        }
        let mut features = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let (start, spec) = self.feature_spec()?;
            if !seen.insert(spec.name.to_ascii_lowercase()) {
                return Err(Self::invalid(
                    start,
                    format!("feature `{}` listed twice", spec.name),
                ));
            }
            features.push(spec);
            if self.eat(TokenKind::Comma).is_some() {
                continue;
            }
            if self.eat(TokenKind::RBracket).is_some() {
                break;
            }
            return Err(self.unexpected(&["`,`", "`]`"]));
        }
        Ok(Some(VariationFilter { features }))
    }

    fn feature_spec(&mut self) -> Result<(&'a Token, FeatureSpec), SyntaxError> {
        let class = match self.peek_kind() {
            Some(TokenKind::KwShared) => Some(FeatureClass::Shared),
            Some(TokenKind::KwNonShared) => Some(FeatureClass::NonShared),
            Some(TokenKind::KwSpecific) => Some(FeatureClass::Specific),
            _ => None,
        };
        if class.is_some() {
            self.bump();
        }
        let name = match self.eat(TokenKind::Ident) {
            Some(t) => t,
            None if class.is_some() => return Err(self.unexpected(&["identifier"])),
            None => {
                return Err(self.unexpected(&["shared", "non-shared", "specific", "identifier"]))
            }
        };
        let type_spec = if self.eat(TokenKind::Colon).is_some() {
            Some(self.feature_type()?)
        } else {
            None
        };
        Ok((
            name,
            FeatureSpec {
                class,
                name: name.lexeme.clone(),
                type_spec,
            },
        ))
    }

    fn feature_type(&mut self) -> Result<FeatureTypeSpec, SyntaxError> {
        match self.peek_kind() {
            Some(TokenKind::Question) => {
                self.bump();
                Ok(FeatureTypeSpec::Unknown)
            }
            Some(TokenKind::KwAggr) => {
                self.bump();
                Ok(FeatureTypeSpec::Aggr(self.opt_angle_target()?))
            }
            Some(TokenKind::KwRef) => {
                self.bump();
                Ok(FeatureTypeSpec::Ref(self.opt_angle_target()?))
            }
            Some(TokenKind::Ident) => Ok(FeatureTypeSpec::Attribute(self.attribute_type()?)),
            _ => Err(self.unexpected(&["type name", "AGGR", "REF", "`?`"])),
        }
    }

    fn opt_angle_target(&mut self) -> Result<Option<String>, SyntaxError> {
        if self.eat(TokenKind::Lt).is_none() {
            return Ok(None);
        }
        let t = self.expect(TokenKind::Ident)?;
        self.close_angle()?;
        Ok(Some(t.lexeme.clone()))
    }

    fn close_angle(&mut self) -> Result<(), SyntaxError> {
        if self.pending_gt {
            self.pending_gt = false;
            return Ok(());
        }
        match self.peek().map(|t| t.kind) {
            Some(TokenKind::Gt) => {
                self.bump();
                Ok(())
            }
            Some(TokenKind::Indirect) => {
                self.bump();
                self.pending_gt = true;
                Ok(())
            }
            _ => Err(self.unexpected(&["`>`"])),
        }
    }

    fn basic_type(&mut self) -> Result<BasicTypeSpec, SyntaxError> {
        let Some(t) = self.peek().filter(|t| !self.pending_gt && t.kind == TokenKind::Ident) else {
            return Err(self.unexpected(&["number", "string", "boolean"]));
        };
        let ty = match t.lexeme.to_ascii_lowercase().as_str() {
            "number" => BasicType::Number,
            "string" => BasicType::String,
            "boolean" => BasicType::Boolean,
            _ => return Err(self.unexpected(&["number", "string", "boolean"])),
        };
        let capitalized = t.lexeme.starts_with(|c: char| c.is_ascii_uppercase());
        if t.lexeme[1..].chars().any(|c| c.is_ascii_uppercase()) {
            return Err(self.unexpected(&["number", "string", "boolean"]));
        }
        self.bump();
        Ok(BasicTypeSpec { ty, capitalized })
    }

    fn attribute_type(&mut self) -> Result<AttributeTypeSpec, SyntaxError> {
        const EXPECTED: &[&str] = &[
            "number", "string", "boolean", "Set", "List", "Tuple", "Map",
        ];
        let Some(t) = self.peek().filter(|t| !self.pending_gt && t.kind == TokenKind::Ident) else {
            return Err(self.unexpected(EXPECTED));
        };
        let mut ty = match t.lexeme.as_str() {
            "Set" | "List" => {
                self.bump();
                self.expect(TokenKind::Lt)?;
                let inner = Box::new(self.attribute_type()?);
                self.close_angle()?;
                if t.lexeme == "Set" {
                    AttributeTypeSpec::Set(inner)
                } else {
                    AttributeTypeSpec::List(inner)
                }
            }
            "Tuple" => {
                self.bump();
                self.expect(TokenKind::Lt)?;
                let mut items = vec![self.attribute_type()?];
                while !self.pending_gt && self.eat(TokenKind::Comma).is_some() {
                    items.push(self.attribute_type()?);
                }
                self.close_angle()?;
                AttributeTypeSpec::Tuple(items)
            }
            "Map" => {
                self.bump();
                self.expect(TokenKind::Lt)?;
                let key = self.basic_type()?;
                self.expect(TokenKind::Comma)?;
                let value = Box::new(self.attribute_type()?);
                self.close_angle()?;
                AttributeTypeSpec::Map(key, value)
            }
            _ => match self.basic_type() {
                Ok(b) => AttributeTypeSpec::Basic(b),
                Err(_) => return Err(self.unexpected(EXPECTED)),
            },
        };
        while !self.pending_gt && self.at(TokenKind::LBracket) {
            let next = self.tokens.get(self.pos + 1);
            if next.map(|t| t.kind) != Some(TokenKind::RBracket) {
                break;
            }
            self.bump();
            self.bump();
            ty = AttributeTypeSpec::Array(Box::new(ty));
        }
        Ok(ty)
    }
}
