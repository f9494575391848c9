//! Recursive-descent parser for the lambda concrete syntax.
//!
//! ```text
//! term ::= '\' ident '.' term | app
//! app  ::= atom+                       (left-associative)
//! atom ::= integer | ident | ident '.' ident | '(' term ')'
//! ```
//!
//! Comments run from `;;;` to end of line. The same lexer serves the package
//! file syntax, which adds `;`, `,` and `=` at the top level.

use std::fmt;

use thiserror::Error;

use super::{Term, RESERVED_IDENTIFIERS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    Backslash,
    Dot,
    LParen,
    RParen,
    Semi,
    Comma,
    Eq,
    Int(i64),
    Ident(String),
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Backslash => write!(f, "'\\'"),
            Token::Dot => write!(f, "'.'"),
            Token::LParen => write!(f, "'('"),
            Token::RParen => write!(f, "')'"),
            Token::Semi => write!(f, "';'"),
            Token::Comma => write!(f, "','"),
            Token::Eq => write!(f, "'='"),
            Token::Int(n) => write!(f, "integer {n}"),
            Token::Ident(name) => write!(f, "identifier '{name}'"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(source: &str) -> Result<Vec<(Token, u32, u32)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tok_line, tok_col) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            ';' => {
                // Three semicolons start a comment; a single one is a token.
                let rest: String = chars.clone().take(3).collect();
                if rest == ";;;" {
                    while let Some(&c) = chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        bump!();
                    }
                } else {
                    bump!();
                    tokens.push((Token::Semi, tok_line, tok_col));
                }
            }
            '\\' => {
                bump!();
                tokens.push((Token::Backslash, tok_line, tok_col));
            }
            '.' => {
                bump!();
                tokens.push((Token::Dot, tok_line, tok_col));
            }
            '(' => {
                bump!();
                tokens.push((Token::LParen, tok_line, tok_col));
            }
            ')' => {
                bump!();
                tokens.push((Token::RParen, tok_line, tok_col));
            }
            ',' => {
                bump!();
                tokens.push((Token::Comma, tok_line, tok_col));
            }
            '=' => {
                bump!();
                tokens.push((Token::Eq, tok_line, tok_col));
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                let n: i64 = digits.parse().map_err(|_| ParseError {
                    line: tok_line,
                    col: tok_col,
                    message: format!("integer literal '{digits}' out of range"),
                })?;
                tokens.push((Token::Int(n), tok_line, tok_col));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(name), tok_line, tok_col));
            }
            other => {
                return Err(ParseError {
                    line: tok_line,
                    col: tok_col,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    tokens.push((Token::Eof, line, col));
    Ok(tokens)
}

pub(crate) struct Parser {
    tokens: Vec<(Token, u32, u32)>,
    index: usize,
}

impl Parser {
    pub(crate) fn new(source: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: lex(source)?, index: 0 })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.tokens[self.index].0
    }

    fn peek_second(&self) -> &Token {
        let next = (self.index + 1).min(self.tokens.len() - 1);
        &self.tokens[next].0
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.index].0.clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        token
    }

    pub(crate) fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (_, line, col) = self.tokens[self.index];
        ParseError { line, col, message: message.into() }
    }

    pub(crate) fn expect(&mut self, expected: &Token) -> Result<(), ParseError> {
        if self.peek() == expected {
            self.advance();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {expected}, found {}", self.peek())))
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == Token::Eof
    }

    /// Matches a contextual keyword such as `package` or `def`.
    pub(crate) fn eat_keyword(&mut self, keyword: &str) -> bool {
        if matches!(self.peek(), Token::Ident(name) if name == keyword) {
            self.advance();
            true
        } else {
            false
        }
    }

    /// An identifier usable as a name: reserved words are rejected.
    pub(crate) fn expect_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Token::Ident(name) => {
                if RESERVED_IDENTIFIERS.contains(&name.as_str()) {
                    return Err(self.error_here(format!("'{name}' is a reserved identifier")));
                }
                self.advance();
                Ok(name)
            }
            other => Err(self.error_here(format!("expected identifier, found {other}"))),
        }
    }

    /// Parses a full term; stops before any token that cannot continue an
    /// application (`;`, `)`, `,`, `=`, end of input).
    pub(crate) fn parse_term(&mut self) -> Result<Term, ParseError> {
        if *self.peek() == Token::Backslash {
            self.advance();
            let param = self.expect_name()?;
            self.expect(&Token::Dot)?;
            let body = self.parse_term()?;
            return Ok(Term::lam(param, body));
        }
        self.parse_app()
    }

    fn parse_app(&mut self) -> Result<Term, ParseError> {
        let mut term = self.parse_atom()?;
        while self.at_atom_start() {
            let arg = self.parse_atom()?;
            term = Term::app(term, arg);
        }
        Ok(term)
    }

    fn at_atom_start(&self) -> bool {
        matches!(self.peek(), Token::Int(_) | Token::Ident(_) | Token::LParen)
    }

    fn parse_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Token::Int(n) => {
                self.advance();
                Ok(Term::Int(n))
            }
            Token::Ident(_) => {
                let name = self.expect_name()?;
                // A dot followed by an identifier makes a qualified name.
                if *self.peek() == Token::Dot && matches!(self.peek_second(), Token::Ident(_)) {
                    self.advance();
                    let member = self.expect_name()?;
                    Ok(Term::global(name, member))
                } else {
                    Ok(Term::var(name))
                }
            }
            Token::LParen => {
                self.advance();
                let term = self.parse_term()?;
                self.expect(&Token::RParen)?;
                Ok(term)
            }
            other => Err(self.error_here(format!("expected a term, found {other}"))),
        }
    }
}

/// Parses a complete source text as a single term.
pub fn parse_term(source: &str) -> Result<Term, ParseError> {
    let mut parser = Parser::new(source)?;
    let term = parser.parse_term()?;
    if !parser.at_eof() {
        return Err(parser.error_here(format!("unexpected {} after term", parser.peek())));
    }
    Ok(term)
}
