//! Textual ordinal syntax: `w^(w^2*3+1)*4 + w*2 + 7`.
//!
//! `w` is omega. The printer emits strictly descending CNF with no zero
//! coefficients; the parser accepts exactly that shape (plus optional
//! whitespace), so parse . print is the identity.

use super::{Ordinal, OrdinalError};
use num::BigUint;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseOrdinalError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {at}")]
    Expected { expected: &'static str, at: usize },
    #[error("not in Cantor normal form: {0}")]
    NotNormal(String),
}

impl From<OrdinalError> for ParseOrdinalError {
    fn from(e: OrdinalError) -> Self {
        ParseOrdinalError::NotNormal(e.to_string())
    }
}

pub(super) fn write_ordinal(a: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut s = String::new();
    render(a, true, &mut s);
    f.write_str(&s)
}

/// Sums are spaced at the top level and compact inside exponent parens,
/// matching `w^(w^2*3+1)*4 + w*2 + 7`.
fn render(a: &Ordinal, spaced: bool, out: &mut String) {
    use std::fmt::Write;
    if a.is_zero() {
        out.push('0');
        return;
    }
    let one = BigUint::from(1u32);
    for (i, (e, c)) in a.terms().iter().enumerate() {
        if i > 0 {
            out.push_str(if spaced { " + " } else { "+" });
        }
        if e.is_zero() {
            let _ = write!(out, "{}", c);
            continue;
        }
        if e.as_nat().map(|n| n == one) == Some(true) {
            out.push('w');
        } else if let Some(n) = e.as_nat() {
            let _ = write!(out, "w^{}", n);
        } else if *e == Ordinal::omega() && *c == one {
            // `w^w` is unambiguous only without a coefficient
            out.push_str("w^w");
        } else {
            out.push_str("w^(");
            render(e, false, out);
            out.push(')');
        }
        if *c != one {
            let _ = write!(out, "*{}", c);
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn number(&mut self) -> Result<BigUint, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseOrdinalError::Expected { expected: "number", at: start });
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    /// term := 'w' ('^' exponent)? ('*' number)? | number
    fn term(&mut self) -> Result<(Ordinal, BigUint), ParseOrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.bump();
                let exp = if self.peek() == Some(b'^') {
                    self.bump();
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                let coeff = if self.peek() == Some(b'*') {
                    self.bump();
                    self.number()?
                } else {
                    BigUint::from(1u32)
                };
                Ok((exp, coeff))
            }
            Some(c) if c.is_ascii_digit() => Ok((Ordinal::zero(), self.number()?)),
            Some(c) => Err(ParseOrdinalError::UnexpectedChar(c as char, self.pos)),
            None => Err(ParseOrdinalError::UnexpectedEnd),
        }
    }

    /// exponent := number | 'w' ... (single term, no parens) | '(' ordinal ')'
    fn exponent(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.ordinal()?;
                if self.peek() != Some(b')') {
                    return Err(ParseOrdinalError::Expected { expected: "')'", at: self.pos });
                }
                self.bump();
                Ok(inner)
            }
            Some(b'w') => {
                let (e, c) = self.term()?;
                Ok(Ordinal::omega_pow_mul(e, c))
            }
            _ => {
                let n = self.number()?;
                Ok(Ordinal::nat(n))
            }
        }
    }

    fn ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        if self.peek() == Some(b'0') {
            // lone zero (a leading 0 digit only occurs there)
            let save = self.pos;
            let n = self.number()?;
            if n == BigUint::ZERO {
                return Ok(Ordinal::zero());
            }
            self.pos = save;
        }
        let mut terms = vec![self.term()?];
        while self.peek() == Some(b'+') {
            self.bump();
            terms.push(self.term()?);
        }
        Ok(Ordinal::from_terms(terms)?)
    }
}

pub(super) fn parse_ordinal(s: &str) -> Result<Ordinal, ParseOrdinalError> {
    let mut p = Parser { bytes: s.as_bytes(), pos: 0 };
    let a = p.ordinal()?;
    if let Some(c) = p.peek() {
        return Err(ParseOrdinalError::UnexpectedChar(c as char, p.pos));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_syntax() {
        let a: Ordinal = "w^(w^2*3+1)*4 + w*2 + 7".parse().unwrap();
        assert_eq!(a.to_string(), "w^(w^2*3+1)*4 + w*2 + 7");
    }

    #[test]
    fn rejects_non_normal_input() {
        assert!("w + w^2".parse::<Ordinal>().is_err());
        assert!("w*0".parse::<Ordinal>().is_err());
        assert!("w + w".parse::<Ordinal>().is_err());
    }
}
