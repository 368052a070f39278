//! SkiQL text: tokens, abstract syntax, parsing and unparsing.
//!
//! ```
//! use skiql::syntax::{parse_query, unparse};
//!
//! let q = parse_query("FROM User [surname:string]\n  TO Address AGGR").unwrap();
//! assert_eq!(unparse(&q), "FROM User [surname: string] TO Address AGGR");
//! ```

mod ast;
mod lexer;
mod parser;
mod unparse;

pub use ast::*;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, parse_name_spec};
pub use unparse::{unparse, unparse_name_spec};

use thiserror::Error;

/// Lexical, grammatical or semantic problem in query text. Positions are
/// 1-based and count characters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{column}: unexpected character `{found}`")]
    Lex {
        line: usize,
        column: usize,
        found: char,
    },
    #[error("{line}:{column}: expected {}, found {found}", .expected.join(" or "))]
    Parse {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("{line}:{column}: {message}")]
    Invalid {
        line: usize,
        column: usize,
        message: String,
    },
}

impl SyntaxError {
    pub fn line(&self) -> usize {
        match self {
            SyntaxError::Lex { line, .. }
            | SyntaxError::Parse { line, .. }
            | SyntaxError::Invalid { line, .. } => *line,
        }
    }

    pub fn column(&self) -> usize {
        match self {
            SyntaxError::Lex { column, .. }
            | SyntaxError::Parse { column, .. }
            | SyntaxError::Invalid { column, .. } => *column,
        }
    }

    /// `lex`, `parse` or `semantic`.
    pub fn category(&self) -> &'static str {
        match self {
            SyntaxError::Lex { .. } => "lex",
            SyntaxError::Parse { .. } => "parse",
            SyntaxError::Invalid { .. } => "semantic",
        }
    }

    /// The message without its position prefix.
    pub fn message(&self) -> String {
        let full = self.to_string();
        match full.split_once(": ") {
            Some((_, rest)) => rest.to_string(),
            None => full,
        }
    }

    /// The offending line of `source` with a caret under the error column.
    pub fn annotate(&self, source: &str) -> String {
        let text = source.lines().nth(self.line() - 1).unwrap_or("");
        format!(
            "error: {}\n {} | {}\n {} | {}^",
            self,
            self.line(),
            text,
            " ".repeat(self.line().to_string().len()),
            " ".repeat(self.column().saturating_sub(1))
        )
    }
}

/// Tokenizes and parses one query.
pub fn parse_query(text: &str) -> Result<Query, SyntaxError> {
    parse(&tokenize(text)?)
}
