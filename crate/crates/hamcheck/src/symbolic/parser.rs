//! Recursive-descent parser for the expression grammar used by problem files
//! and reports:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' signed-integer)?
//! base   := rational | ident | '(' expr ')' | '-' base
//! ident  := parameter-name | 'u' index | 'p' index
//! ```
//!
//! Whitespace is insignificant; implicit multiplication is a syntax error.
//! Inputs are functions of the field variables only — jet symbols have no
//! textual form and arise purely internally.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use super::expr::{RationalExpr, SymbolicError};
use super::symbol::Symbol;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    /// Byte offset into the input where the problem was detected.
    pub pos: usize,
    pub message: String,
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Declared parameters and ambient dimension for identifier resolution.
#[derive(Clone, Debug)]
pub struct ParseContext {
    n: usize,
    params: BTreeSet<String>,
    /// Covering variables are internal; files never mention them, but report
    /// output re-parsing may.
    allow_covering: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextError {
    #[error("parameter name {0:?} collides with a field/covering symbol")]
    ReservedName(String),
    #[error("parameter name {0:?} is not a valid identifier")]
    InvalidName(String),
}

impl ParseContext {
    pub fn new(n: usize, params: &[&str]) -> Result<Self, ContextError> {
        let mut set = BTreeSet::new();
        for p in params {
            if !is_identifier(p) {
                return Err(ContextError::InvalidName(p.to_string()));
            }
            if parse_up_symbol(p).is_some() {
                return Err(ContextError::ReservedName(p.to_string()));
            }
            set.insert(p.to_string());
        }
        Ok(ParseContext {
            n,
            params: set,
            allow_covering: true,
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn parameters(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|s| s.as_str())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `u3` -> ('u', 3); `p12` -> ('p', 12); anything else -> None.
fn parse_up_symbol(s: &str) -> Option<(char, u32)> {
    let mut chars = s.chars();
    let fam = chars.next()?;
    if fam != 'u' && fam != 'p' {
        return None;
    }
    let digits: String = chars.collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<u32>().ok().map(|i| (fam, i))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(i) => write!(f, "{i}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Plus => write!(f, "+"),
            Tok::Minus => write!(f, "-"),
            Tok::Star => write!(f, "*"),
            Tok::Slash => write!(f, "/"),
            Tok::Caret => write!(f, "^"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((start, Tok::Int(digits.parse().expect("digit run"))));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => return err(i, format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    ctx: &'a ParseContext,
    end: usize,
}

/// Parses `text` into a canonical expression.
pub fn parse_expr(text: &str, ctx: &ParseContext) -> Result<RationalExpr, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ctx,
        end: text.len(),
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some((at, tok)) => err(at, format!("unexpected {tok:?}; operators must be explicit")),
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<(usize, Tok)> {
        self.toks.get(self.pos).cloned()
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(at, _)| *at).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.term()?;
        while let Some((_, tok)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.factor()?;
        while let Some((at, tok)) = self.peek() {
            match tok {
                Tok::Star => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.div_expr(&rhs).map_err(|e| match e {
                        SymbolicError::DivisionByZero => ParseError {
                            pos: at,
                            message: "division by zero".into(),
                        },
                        other => ParseError {
                            pos: at,
                            message: other.to_string(),
                        },
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RationalExpr, ParseError> {
        let base = self.base()?;
        if let Some((at, Tok::Caret)) = self.peek() {
            self.pos += 1;
            let exp = self.signed_integer()?;
            return base.pow_expr(exp).map_err(|e| ParseError {
                pos: at,
                message: e.to_string(),
            });
        }
        Ok(base)
    }

    fn signed_integer(&mut self) -> Result<i64, ParseError> {
        let neg = matches!(self.peek(), Some((_, Tok::Minus)));
        if neg {
            self.pos += 1;
        }
        match self.bump() {
            Some((at, Tok::Int(i))) => {
                let v: i64 = i
                    .try_into()
                    .map_err(|_| ParseError {
                        pos: at,
                        message: "exponent out of range".into(),
                    })?;
                Ok(if neg { -v } else { v })
            }
            Some((at, tok)) => err(at, format!("expected integer exponent, found {tok:?}")),
            None => err(self.end, "expected integer exponent, found end of input"),
        }
    }

    fn base(&mut self) -> Result<RationalExpr, ParseError> {
        match self.bump() {
            Some((_, Tok::Int(i))) => Ok(RationalExpr::from_rat(BigRational::from(i))),
            Some((at, Tok::Ident(name))) => self.resolve_ident(at, &name),
            Some((_, Tok::LParen)) => {
                let e = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(e),
                    Some((at, tok)) => err(at, format!("expected ')', found {tok:?}")),
                    None => err(self.end, "expected ')', found end of input"),
                }
            }
            Some((_, Tok::Minus)) => Ok(self.base()?.neg_expr()),
            Some((at, tok)) => err(at, format!("expected a value, found {tok:?}")),
            None => err(self.end, "expected a value, found end of input"),
        }
    }

    fn resolve_ident(&self, at: usize, name: &str) -> Result<RationalExpr, ParseError> {
        if self.ctx.params.contains(name) {
            return Ok(RationalExpr::param(name));
        }
        if let Some((fam, idx)) = parse_up_symbol(name) {
            if idx as usize > self.ctx.n || idx == 0 {
                return err(
                    at,
                    format!(
                        "index out of range: {name} but dimension is {}",
                        self.ctx.n
                    ),
                );
            }
            return match fam {
                'u' => Ok(RationalExpr::symbol(Symbol::u(idx))),
                'p' if self.ctx.allow_covering => Ok(RationalExpr::symbol(Symbol::p(idx))),
                _ => err(at, format!("unknown identifier {name:?}")),
            };
        }
        err(at, format!("unknown identifier {name:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx3() -> ParseContext {
        ParseContext::new(3, &[]).unwrap()
    }

    #[test]
    fn parses_polynomial_entries() {
        let e = parse_expr("6*u1*u2", &ctx3()).unwrap();
        let by_hand = &(&RationalExpr::from_int(6) * &RationalExpr::u(1)) * &RationalExpr::u(2);
        assert_eq!(e, by_hand);
        assert!(parse_expr("0", &ctx3()).unwrap().is_zero());
    }

    #[test]
    fn parses_rational_function() {
        let e = parse_expr("(u1^2 - 1/u1^2)/2", &ctx3()).unwrap();
        assert_eq!(e.to_string(), "(u1^4-1)/(2*u1^2)");
    }

    #[test]
    fn print_parse_fixed_point() {
        let samples = [
            "6*u1*u2",
            "(u1^2-1/u1^2)/2",
            "-u1+3/4*u2^2-1/2",
            "(u1+u2)^3/(u1-u2)",
            "a*u1*u2",
        ];
        let ctx = ParseContext::new(3, &["a"]).unwrap();
        for s in samples {
            let e = parse_expr(s, &ctx).unwrap();
            let printed = e.to_string();
            let reparsed = parse_expr(&printed, &ctx).unwrap();
            assert_eq!(e, reparsed, "round trip failed for {s}");
        }
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let e = parse_expr("2u1", &ctx3()).unwrap_err();
        assert_eq!(e.pos, 1);
    }

    #[test]
    fn reports_unknown_identifier_and_bad_index() {
        let e = parse_expr("q1+1", &ctx3()).unwrap_err();
        assert!(e.message.contains("unknown identifier"));
        let e = parse_expr("u4", &ctx3()).unwrap_err();
        assert!(e.message.contains("index out of range"));
        // u0 is not a field variable
        assert!(parse_expr("u0", &ctx3()).is_err());
    }

    #[test]
    fn rejects_zero_denominator_literal() {
        let e = parse_expr("1/0", &ctx3()).unwrap_err();
        assert!(e.message.contains("division by zero"));
        let e = parse_expr("1/(u1-u1)", &ctx3()).unwrap_err();
        assert!(e.message.contains("division by zero"));
    }

    #[test]
    fn exponent_precedence_binds_tighter_than_division() {
        // 8/2^2 = 2, not 16
        let e = parse_expr("8/2^2", &ctx3()).unwrap();
        assert_eq!(e, RationalExpr::from_int(2));
        let e = parse_expr("u1^-2", &ctx3()).unwrap();
        assert_eq!(e.to_string(), "(1)/(u1^2)");
    }

    #[test]
    fn declared_parameters_resolve() {
        let ctx = ParseContext::new(2, &["a", "c1"]).unwrap();
        let e = parse_expr("a*c1*u2", &ctx).unwrap();
        assert_eq!(e.symbols().len(), 3);
        assert!(ParseContext::new(2, &["u1"]).is_err());
        assert!(ParseContext::new(2, &["p2"]).is_err());
    }
}
