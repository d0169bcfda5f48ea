//! Differential polynomial text syntax.
//!
//! `d1^2 d2 x3` is the derivative delta_1^2 delta_2 X_3; full terms look like
//! `2/3 * (d1 x1)^2 * x2 - d2 x1`. Whitespace separates derivation tokens
//! inside a derivative; `*` separates factors; `^` raises a factor to a
//! natural power.

use super::{Derivative, DiffCtx, DiffPoly};
use num::{BigInt, BigRational, One};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseDiffPolyError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {at}")]
    Expected { expected: &'static str, at: usize },
    #[error("derivation index {0} out of range 1..={1}")]
    BadDerivation(usize, usize),
    #[error("indeterminate index {0} out of range 1..={1}")]
    BadIndeterminate(usize, usize),
}

pub(super) fn write_diff_poly(p: &DiffPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let ctx = p.ctx();
    let one = BigRational::one();
    let minus_one = -BigRational::one();
    // highest-rank monomials first for readability
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
        let coeff_is_one = mag == one || coeff == &minus_one && false;
        let mut wrote_factor = false;
        if !coeff_is_one || mono.is_empty() {
            write!(f, "{}", mag)?;
            wrote_factor = true;
        }
        for (&idx, &e) in mono {
            if wrote_factor {
                write!(f, "*")?;
            }
            let u = Derivative::from_rank_index(idx, ctx).expect("valid index");
            let needs_parens = u.order() > 0 && e > 1;
            if needs_parens {
                write!(f, "({})", u)?;
            } else {
                write!(f, "{}", u)?;
            }
            if e > 1 {
                write!(f, "^{}", e)?;
            }
            wrote_factor = true;
        }
    }
    Ok(())
}

struct Parser<'a> {
    ctx: DiffCtx,
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

    /// Peeks without consuming whitespace first (derivation tokens are
    /// whitespace-separated but glued to their derivative).
    fn peek_raw(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, ParseDiffPolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseDiffPolyError::Expected { expected: "number", at: start });
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn small_number(&mut self) -> Result<usize, ParseDiffPolyError> {
        let n = self.number()?;
        n.try_into()
            .map_err(|_| ParseDiffPolyError::Expected { expected: "small index", at: self.pos })
    }

    /// derivative := ('d' IDX ('^' NUM)? WS)* 'x' IDX
    fn derivative(&mut self) -> Result<Derivative, ParseDiffPolyError> {
        let mut exps = vec![0u32; self.ctx.m];
        loop {
            match self.peek() {
                Some(b'd') => {
                    self.pos += 1;
                    let i = self.small_number()?;
                    if i == 0 || i > self.ctx.m {
                        return Err(ParseDiffPolyError::BadDerivation(i, self.ctx.m));
                    }
                    let e = if self.peek_raw() == Some(b'^') {
                        self.pos += 1;
                        self.small_number()? as u32
                    } else {
                        1
                    };
                    exps[i - 1] += e;
                }
                Some(b'x') => {
                    self.pos += 1;
                    let i = self.small_number()?;
                    if i == 0 || i > self.ctx.n {
                        return Err(ParseDiffPolyError::BadIndeterminate(i, self.ctx.n));
                    }
                    return Ok(Derivative::new(i, exps));
                }
                Some(c) => return Err(ParseDiffPolyError::UnexpectedChar(c as char, self.pos)),
                None => return Err(ParseDiffPolyError::UnexpectedEnd),
            }
        }
    }

    /// factor := rational | derivative ('^' NUM)? | '(' derivative ')' ('^' NUM)?
    fn factor(&mut self) -> Result<DiffPoly, ParseDiffPolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.number()?;
                let den = if self.peek_raw() == Some(b'/') {
                    self.pos += 1;
                    self.number()?
                } else {
                    BigInt::one()
                };
                Ok(DiffPoly::constant(self.ctx, BigRational::new(num, den)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(ParseDiffPolyError::Expected { expected: "')'", at: self.pos });
                }
                self.pos += 1;
                let e = self.power()?;
                Ok(inner.pow(e))
            }
            Some(b'd') | Some(b'x') => {
                let u = self.derivative()?;
                let e = self.power()?;
                Ok(DiffPoly::var(self.ctx, &u).pow(e))
            }
            Some(c) => Err(ParseDiffPolyError::UnexpectedChar(c as char, self.pos)),
            None => Err(ParseDiffPolyError::UnexpectedEnd),
        }
    }

    fn power(&mut self) -> Result<u32, ParseDiffPolyError> {
        if self.peek_raw() == Some(b'^') {
            self.pos += 1;
            Ok(self.small_number()? as u32)
        } else {
            Ok(1)
        }
    }

    /// term := factor ('*' factor)*
    fn term(&mut self) -> Result<DiffPoly, ParseDiffPolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    /// poly := ('-')? term (('+'|'-') term)*
    fn poly(&mut self) -> Result<DiffPoly, ParseDiffPolyError> {
        let mut acc = DiffPoly::zero(self.ctx);
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

pub(super) fn parse_diff_poly(ctx: DiffCtx, s: &str) -> Result<DiffPoly, ParseDiffPolyError> {
    let mut p = Parser { ctx, bytes: s.as_bytes(), pos: 0 };
    let poly = p.poly()?;
    if let Some(c) = p.peek() {
        return Err(ParseDiffPolyError::UnexpectedChar(c as char, p.pos));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spec_forms() {
        let ctx = DiffCtx::new(3, 2);
        let u = DiffPoly::parse(ctx, "d1^2 d2 x3").unwrap();
        let d = u.leader().unwrap();
        assert_eq!(d, Derivative::new(3, vec![2, 1]));

        let f = DiffPoly::parse(ctx, "2/3 * (d1 x1)^2 * x2 - d2 x1").unwrap();
        assert_eq!(f.total_degree(), 3);
    }

    #[test]
    fn print_parse_roundtrip() {
        let ctx = DiffCtx::new(2, 2);
        for s in [
            "x1",
            "2/3*(d1 x1)^2*x2 - d2 x1",
            "d2 x2*(d1 x1)^2 + x1*d1 x1",
            "-x1 + 1",
        ] {
            let f = DiffPoly::parse(ctx, s).unwrap();
            let g = DiffPoly::parse(ctx, &f.to_string()).unwrap();
            assert_eq!(f, g, "roundtrip of {s} printed {f}");
        }
    }

    #[test]
    fn zero_prints_zero() {
        let ctx = DiffCtx::new(1, 1);
        assert_eq!(DiffPoly::zero(ctx).to_string(), "0");
    }
}
