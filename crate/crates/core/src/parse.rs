//! Polynomial text input.
//!
//! Two forms are accepted:
//!
//! * an ascending coefficient list, `-1,0,1` for `t^2 - 1`;
//! * an expression in a single indeterminate, e.g. `t^2 + t + 1`,
//!   `3/2 x^3 - (x - 1)^2` or `(t^2+1)*(t-1)`.
//!
//! Text without a comma or letter is read as a one-element coefficient list.
//! Expressions support `+ - * /`, `^` (or `**`) with a nonnegative integer
//! exponent, parentheses and implicit multiplication. Division is only
//! allowed by a nonzero constant.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::parse_rational;

/// Parses either input form. The result is never the zero polynomial.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::EmptyInput);
    }
    let poly = if text.contains(',') || !text.chars().any(|c| c.is_alphabetic()) {
        parse_coefficient_list(text)?
    } else {
        Parser::new(text).parse()?
    };
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(poly)
}

fn parse_coefficient_list(text: &str) -> Result<Polynomial> {
    let mut offset = 0;
    let mut coeffs = Vec::new();
    for item in text.split(',') {
        let value = parse_rational(item).ok_or_else(|| Error::Syntax {
            position: offset,
            message: format!("expected a rational coefficient, found {:?}", item.trim()),
        })?;
        coeffs.push(value);
        offset += item.len() + 1;
    }
    Ok(Polynomial::new(coeffs))
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    variable: Option<String>,
    error: Option<Error>,
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' if bytes.get(i + 1) == Some(&b'*') => {
                i += 1;
                Token::Caret
            }
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &text[start..i];
                let value =
                    parse_rational(lit).ok_or_else(|| syntax(start, format!("bad number {lit:?}")))?;
                out.push((start, Token::Number(value)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character {ch:?}")));
            }
        };
        out.push((start, token));
        i += 1;
    }
    Ok(out)
}

impl Parser {
    fn new(text: &str) -> Self {
        let (tokens, error) = match tokenize(text) {
            Ok(t) => (t, None),
            Err(e) => (Vec::new(), Some(e)),
        };
        Self {
            tokens,
            pos: 0,
            end: text.len(),
            variable: None,
            error,
        }
    }

    fn parse(mut self) -> Result<Polynomial> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        let poly = self.expr()?;
        if let Some((at, tok)) = self.tokens.get(self.pos) {
            return Err(syntax(*at, format!("unexpected token {tok:?}")));
        }
        Ok(poly)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(at, _)| *at)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let divisor = self.unary()?;
                    match divisor.degree() {
                        Some(0) => acc = acc.scale(&divisor.coeffs()[0].recip()),
                        None => return Err(syntax(at, "division by zero")),
                        Some(_) => return Err(syntax(at, "division by a non-constant polynomial")),
                    }
                }
                Some(Token::Number(_) | Token::Ident(_) | Token::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.here();
        match self.tokens.get(self.pos) {
            Some((_, Token::Number(n))) if n.is_integer() => {
                let exp = n
                    .to_integer()
                    .to_u32()
                    .filter(|&e| e <= 4096)
                    .ok_or_else(|| syntax(at, "exponent out of range"))?;
                self.pos += 1;
                Ok(base.pow(exp))
            }
            _ => Err(syntax(at, "expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.here();
        let Some((_, token)) = self.tokens.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match token {
            Token::Number(value) => Ok(Polynomial::constant(value)),
            Token::Ident(name) => {
                match &self.variable {
                    None => self.variable = Some(name),
                    Some(v) if *v == name => {}
                    Some(v) => {
                        return Err(syntax(
                            at,
                            format!("more than one indeterminate ({v} and {name})"),
                        ))
                    }
                }
                Ok(Polynomial::indeterminate())
            }
            Token::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(syntax(at, format!("unexpected token {other:?}"))),
        }
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_polynomial(text)
    }
}
