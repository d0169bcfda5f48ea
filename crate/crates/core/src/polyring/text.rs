//! Polynomial text syntax: `3/2*x1^2*x2 - x3 + 1`.

use super::{Monomial, Poly};
use num::{BigInt, BigRational, One};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParsePolyError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {at}")]
    Expected { expected: &'static str, at: usize },
    #[error("variable index {0} out of range 1..={1}")]
    BadVariable(usize, usize),
}

pub(super) fn write_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let one = BigRational::one();
    for (i, (mono, coeff)) in p.terms().iter().rev().enumerate() {
        let neg = coeff < &BigRational::from_integer(0.into());
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let mag = if neg { -coeff.clone() } else { coeff.clone() };
        let constant = mono.degree() == 0;
        let mut wrote = false;
        if mag != one || constant {
            write!(f, "{}", mag)?;
            wrote = true;
        }
        for (vi, &e) in mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if wrote {
                write!(f, "*")?;
            }
            write!(f, "x{}", vi + 1)?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
            wrote = true;
        }
    }
    Ok(())
}

struct Parser<'a> {
    n_vars: usize,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.bytes.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, ParsePolyError> {
        self.peek();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParsePolyError::Expected { expected: "number", at: start });
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().parse().unwrap())
    }

    fn factor(&mut self) -> Result<Poly, ParsePolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                let den = if self.peek_raw() == Some(b'/') {
                    self.pos += 1;
                    self.number()?
                } else {
                    BigInt::one()
                };
                Ok(Poly::constant(self.n_vars, BigRational::new(num, den)))
            }
            Some(b'x') => {
                self.pos += 1;
                let i: usize = self
                    .number()?
                    .try_into()
                    .map_err(|_| ParsePolyError::Expected { expected: "small index", at: self.pos })?;
                if i == 0 || i > self.n_vars {
                    return Err(ParsePolyError::BadVariable(i, self.n_vars));
                }
                let e = if self.peek_raw() == Some(b'^') {
                    self.pos += 1;
                    self.number()?
                        .try_into()
                        .map_err(|_| ParsePolyError::Expected { expected: "small power", at: self.pos })?
                } else {
                    1u64
                };
                let mut m = Monomial::constant(self.n_vars);
                m.0[i - 1] = e as u32;
                Ok(Poly::from_monomial(self.n_vars, m, BigRational::one()))
            }
            Some(c) => Err(ParsePolyError::UnexpectedChar(c as char, self.pos)),
            None => Err(ParsePolyError::UnexpectedEnd),
        }
    }

    fn term(&mut self) -> Result<Poly, ParsePolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn poly(&mut self) -> Result<Poly, ParsePolyError> {
        let mut acc = Poly::zero(self.n_vars);
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negate = true;
        }
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

pub(super) fn parse_poly(n_vars: usize, s: &str) -> Result<Poly, ParsePolyError> {
    let mut p = Parser { n_vars, bytes: s.as_bytes(), pos: 0 };
    let poly = p.poly()?;
    if let Some(c) = p.peek() {
        return Err(ParsePolyError::UnexpectedChar(c as char, p.pos));
    }
    Ok(poly)
}
