use std::fmt;

use super::SyntaxError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    KwEntity,
    KwRel,
    KwAny,
    KwUnion,
    KwFrom,
    KwTo,
    KwRef,
    KwAggr,
    KwShared,
    KwNonShared,
    KwSpecific,
    KwKeys,
    KwHistory,
    KwBefore,
    KwAfter,
    KwBetween,
    Ident,
    Date,
    Regex,
    LBracket,
    RBracket,
    Lt,
    Gt,
    LParen,
    RParen,
    Comma,
    Colon,
    Star,
    Indirect,
    Underscore,
    Question,
}

impl TokenKind {
    pub fn describe(self) -> &'static str {
        use TokenKind::*;
        match self {
            KwEntity => "ENTITY",
            KwRel => "REL",
            KwAny => "ANY",
            KwUnion => "UNION",
            KwFrom => "FROM",
            KwTo => "TO",
            KwRef => "REF",
            KwAggr => "AGGR",
            KwShared => "shared",
            KwNonShared => "non-shared",
            KwSpecific => "specific",
            KwKeys => "keys",
            KwHistory => "history",
            KwBefore => "before",
            KwAfter => "after",
            KwBetween => "between",
            Ident => "identifier",
            Date => "date",
            Regex => "regular expression",
            LBracket => "`[`",
            RBracket => "`]`",
            Lt => "`<`",
            Gt => "`>`",
            LParen => "`(`",
            RParen => "`)`",
            Comma => "`,`",
            Colon => "`:`",
            Star => "`*`",
            Indirect => "`>>`",
            Underscore => "`_`",
            Question => "`?`",
        }
    }

    fn keyword(word: &str) -> Option<TokenKind> {
        use TokenKind::*;
        Some(match word {
            "ENTITY" => KwEntity,
            "REL" => KwRel,
            "ANY" => KwAny,
            "UNION" => KwUnion,
            "FROM" => KwFrom,
            "TO" => KwTo,
            "REF" => KwRef,
            "AGGR" => KwAggr,
            "shared" => KwShared,
            "specific" => KwSpecific,
            "keys" => KwKeys,
            "history" => KwHistory,
            "before" => KwBefore,
            "after" => KwAfter,
            "between" => KwBetween,
            _ => return None,
        })
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text; for regular expressions, the pattern without `r"` `"`.
    pub lexeme: String,
    pub line: usize,
    pub column: usize,
    /// Byte range in the input.
    pub start: usize,
    pub end: usize,
    pub end_line: usize,
    pub end_column: usize,
}

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.input[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Splits query text into tokens. Keywords are case-sensitive; identifiers
/// are ASCII `[A-Za-z_][A-Za-z0-9_]*`.
pub fn tokenize(input: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor {
        input,
        pos: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let (start, line, column) = (cur.pos, cur.line, cur.column);
        let lex_error = |found: char| SyntaxError::Lex {
            line,
            column,
            found,
        };
        let simple = match c {
            '[' => Some(TokenKind::LBracket),
            ']' => Some(TokenKind::RBracket),
            '<' => Some(TokenKind::Lt),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ',' => Some(TokenKind::Comma),
            ':' => Some(TokenKind::Colon),
            '*' => Some(TokenKind::Star),
            '?' => Some(TokenKind::Question),
            _ => None,
        };

        let kind = if let Some(kind) = simple {
            cur.bump();
            kind
        } else if c == '>' {
            cur.bump();
            if cur.peek() == Some('>') {
                cur.bump();
                TokenKind::Indirect
            } else {
                TokenKind::Gt
            }
        } else if c == 'r' && cur.peek_at(1) == Some('"') {
            cur.bump();
            cur.bump();
            let mut pattern = String::new();
            loop {
                match cur.bump() {
                    None => return Err(lex_error('"')),
                    Some('"') => break,
                    Some('\\') if cur.peek() == Some('"') => {
                        cur.bump();
                        pattern.push('"');
                    }
                    Some(ch) => pattern.push(ch),
                }
            }
            tokens.push(Token {
                kind: TokenKind::Regex,
                lexeme: pattern,
                line,
                column,
                start,
                end: cur.pos,
                end_line: cur.line,
                end_column: cur.column,
            });
            continue;
        } else if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '-') {
                cur.bump();
            }
            let text = &input[start..cur.pos];
            if !is_date(text) {
                return Err(lex_error(c));
            }
            TokenKind::Date
        } else if is_word_char(c) {
            while let Some(ch) = cur.peek() {
                if !is_word_char(ch) {
                    break;
                }
                if !ch.is_ascii() {
                    return Err(lex_error(ch));
                }
                cur.bump();
            }
            let word = &input[start..cur.pos];
            if word == "non" && input[cur.pos..].starts_with("-shared") {
                let after = input[cur.pos + "-shared".len()..].chars().next();
                if !after.is_some_and(is_word_char) {
                    for _ in 0.."-shared".len() {
                        cur.bump();
                    }
                }
            }
            match &input[start..cur.pos] {
                "_" => TokenKind::Underscore,
                "non-shared" => TokenKind::KwNonShared,
                w => TokenKind::keyword(w).unwrap_or(TokenKind::Ident),
            }
        } else {
            return Err(lex_error(c));
        };

        tokens.push(Token {
            kind,
            lexeme: input[start..cur.pos].to_string(),
            line,
            column,
            start,
            end: cur.pos,
            end_line: cur.line,
            end_column: cur.column,
        });
    }
    Ok(tokens)
}

fn is_date(text: &str) -> bool {
    let b = text.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter()
            .enumerate()
            .all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit())
}
