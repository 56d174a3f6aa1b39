//! Recursive-descent parser for scalar expressions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-s^2` is `-(s^2)`, and it is right
//! associative. Its exponent must be free of the variable.

use std::fmt;

use thiserror::Error;

use super::expr::{self as ex, Expr, Func};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", join_expected(.expected))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} depends on the variable")]
    NonConstantExponent { offset: usize },
    #[error("empty expression")]
    Empty,
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NonConstantExponent { offset } => Some(*offset),
            ParseError::Empty => None,
        }
    }
}

fn join_expected(items: &[&str]) -> String {
    match items {
        [] => String::new(),
        [one] => (*one).to_string(),
        [init @ .., last] => format!("{} or {}", init.join(", "), last),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Bad(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(_) => f.write_str("number"),
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Star => f.write_str("'*'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Caret => f.write_str("'^'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Bad(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Vec<(usize, Tok)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                i = j;
                match src[start..j].parse::<f64>() {
                    Ok(v) => Tok::Num(v),
                    Err(_) => Tok::Bad('.'),
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                i = j;
                Tok::Ident(src[start..j].to_string())
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                out.push((start, Tok::Bad(ch)));
                // stop lexing: the parser reports the first bad token
                break;
            }
        };
        if !matches!(tok, Tok::Num(_) | Tok::Ident(_) | Tok::Bad(_)) {
            i += 1;
        }
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    out
}

const OPERAND: &[&str] = &["number", "identifier", "'('", "'-'"];

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    param: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exponent = self.unary()?;
        if exponent.contains_var() {
            return Err(ParseError::NonConstantExponent { offset: at });
        }
        let k = exponent
            .eval(0.0)
            .map_err(|_| ParseError::NonConstantExponent { offset: at })?;
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (at, tok) = (self.offset(), self.peek().clone());
        match tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.close_paren()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == self.param {
                    return Ok(ex::var());
                }
                if let Some(f) = Func::from_name(&name) {
                    if *self.peek() != Tok::LParen {
                        return Err(self.unexpected(&["'('"]));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.close_paren()?;
                    return Ok(Expr::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => Ok(Expr::Const(std::f64::consts::E)),
                    _ => Err(ParseError::UnknownIdentifier { name, offset: at }),
                }
            }
            _ => Err(self.unexpected(OPERAND)),
        }
    }

    fn close_paren(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["operator", "')'"]))
        }
    }
}

/// Parses `text` as an expression in the variable named `param`.
pub fn parse_expr(text: &str, param: &str) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: lex(text),
        pos: 0,
        param,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}

/// Parses a variable-free expression and evaluates it.
pub fn parse_constant(text: &str) -> Result<f64, crate::Error> {
    // no identifier can match the empty parameter name
    let e = parse_expr(text, "")?;
    e.eval(0.0)
}
