//! Ordinals below epsilon_0 in Cantor normal form.
//!
//! An ordinal is a finite sum `w^e1*c1 + w^e2*c2 + ...` with exponents
//! strictly descending (themselves ordinals) and coefficients positive
//! naturals. The empty sum is 0. Comparison, ordinary (left) sum, natural
//! sum `#`, natural product, fundamental sequences `a[x]`, and the
//! coordinate bound `|a|` are all exact.

mod assign;
mod text;

pub use assign::{autoreduced_ordinal, bad_dickson_ordinal, bad_leader_ordinal, BadLeaderSeq};
pub use text::ParseOrdinalError;

use num::BigUint;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("malformed Cantor normal form: {0}")]
    Malformed(String),
    #[error("fundamental sequence undefined at 0")]
    FundamentalOfZero,
    #[error("{0}")]
    Domain(String),
    #[error("residual order types implemented only for dimension <= {max}, got {got}")]
    UnsupportedDimension { max: usize, got: usize },
}

/// Cantor normal form ordinal below epsilon_0.
///
/// Derived lexicographic ordering on the term list coincides with ordinal
/// order: terms are compared by (exponent, coefficient) and a proper prefix
/// is smaller than any extension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, BigUint)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn one() -> Self {
        Ordinal::nat(1u32)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    pub fn nat(n: impl Into<BigUint>) -> Self {
        let n = n.into();
        if n == BigUint::ZERO {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal { terms: vec![(e, BigUint::from(1u32))] }
    }

    /// `w^e * c`; zero when `c = 0`.
    pub fn omega_pow_mul(e: Ordinal, c: impl Into<BigUint>) -> Self {
        let c = c.into();
        if c == BigUint::ZERO {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds from a term list, checking CNF validity.
    pub fn from_terms(terms: Vec<(Ordinal, BigUint)>) -> Result<Self, OrdinalError> {
        for i in 0..terms.len() {
            if terms[i].1 == BigUint::ZERO {
                return Err(OrdinalError::Malformed("zero coefficient".into()));
            }
            if i + 1 < terms.len() && terms[i].0 <= terms[i + 1].0 {
                return Err(OrdinalError::Malformed(
                    "exponents must be strictly descending".into(),
                ));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, BigUint)] {
        &self.terms
    }

    /// The value as a natural number, when below omega.
    pub fn as_nat(&self) -> Option<BigUint> {
        if self.is_zero() {
            Some(BigUint::ZERO)
        } else if self.terms.len() == 1 && self.terms[0].0.is_zero() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Greatest exponent `max a` (undefined on 0).
    pub fn max_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Least exponent `min a` (undefined on 0).
    pub fn min_exp(&self) -> Option<&Ordinal> {
        self.terms.last().map(|(e, _)| e)
    }

    /// Limit ordinal: nonzero with `min a > 0`.
    pub fn is_limit(&self) -> bool {
        self.min_exp().is_some_and(|e| !e.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.min_exp().is_some_and(|e| e.is_zero())
    }

    pub fn compare(&self, other: &Ordinal) -> Ordering {
        self.cmp(other)
    }

    /// Ordinary (non-commutative) ordinal sum `a + b` in CNF.
    pub fn left_sum(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.max_exp() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), c.clone())),
                Ordering::Equal | Ordering::Less => break,
            }
        }
        let mut rhs_terms = rhs.terms.clone();
        if let Some((e, c)) = self.terms.iter().find(|(e, _)| e == lead) {
            debug_assert_eq!(&rhs_terms[0].0, e);
            rhs_terms[0].1 += c;
        }
        terms.extend(rhs_terms);
        Ordinal { terms }
    }

    /// Natural (Hessenberg) sum `a # b`: coefficientwise merge.
    pub fn natural_sum(&self, rhs: &Ordinal) -> Ordinal {
        let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            if i == self.terms.len() {
                terms.push(rhs.terms[j].clone());
                j += 1;
            } else if j == rhs.terms.len() {
                terms.push(self.terms[i].clone());
                i += 1;
            } else {
                match self.terms[i].0.cmp(&rhs.terms[j].0) {
                    Ordering::Greater => {
                        terms.push(self.terms[i].clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        terms.push(rhs.terms[j].clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        terms.push((
                            self.terms[i].0.clone(),
                            &self.terms[i].1 + &rhs.terms[j].1,
                        ));
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        Ordinal { terms }
    }

    /// Natural product: distributes over natural sums of `w^(e1 # e2)*c1*c2`.
    pub fn natural_prod(&self, rhs: &Ordinal) -> Ordinal {
        let mut acc = Ordinal::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let m = Ordinal::omega_pow_mul(e1.natural_sum(e2), c1 * c2);
                acc = acc.natural_sum(&m);
            }
        }
        acc
    }

    /// Fundamental sequence `a[x]`: `a - 1` on successors, least-term rewrite
    /// on limits. Always strictly below `a`.
    pub fn fundamental(&self, x: &BigUint) -> Result<Ordinal, OrdinalError> {
        if self.is_zero() {
            return Err(OrdinalError::FundamentalOfZero);
        }
        let mut terms = self.terms.clone();
        let (min_exp, min_coeff) = terms.pop().expect("nonzero");
        if min_exp.is_zero() {
            // successor: subtract one
            let c = &min_coeff - 1u32;
            if c != BigUint::ZERO {
                terms.push((min_exp, c));
            }
            return Ok(Ordinal { terms });
        }
        let c = &min_coeff - 1u32;
        if c != BigUint::ZERO {
            terms.push((min_exp.clone(), c));
        }
        if *x != BigUint::ZERO {
            let stepped = min_exp.fundamental(x)?;
            terms.push((stepped, x.clone()));
        }
        Ok(Ordinal { terms })
    }

    /// Coordinate bound `|a|`: the largest coefficient appearing anywhere in
    /// the (recursive) normal form.
    pub fn coord_bound(&self) -> BigUint {
        let mut best = BigUint::ZERO;
        for (e, c) in &self.terms {
            best = best.max(c.clone()).max(e.coord_bound());
        }
        best
    }

    /// Structural nesting depth; 0 for naturals.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|(e, _)| if e.is_zero() { 0 } else { 1 + e.depth() })
            .max()
            .unwrap_or(0)
    }

    /// Total number of term nodes in the recursive normal form.
    pub fn node_count(&self) -> usize {
        self.terms.iter().map(|(e, _)| 1 + e.node_count()).sum()
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_ordinal(self, f)
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({})", self)
    }
}

impl std::str::FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_ordinal(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigUint;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn compare_basics() {
        assert_eq!(Ordinal::zero().compare(&Ordinal::zero()), Ordering::Equal);
        let w = Ordinal::omega();
        let w1 = w.left_sum(&Ordinal::one());
        assert_eq!(w.compare(&w1), Ordering::Less);
    }

    #[test]
    fn compare_against_enumeration_below_omega_cubed() {
        // Oracle: ordinals below w^3 with coefficients <= 9 are triples
        // (a,b,c) |-> w^2*a + w*b + c ordered lexicographically.
        let build = |a: u32, b: u32, c: u32| {
            let mut terms = Vec::new();
            if a > 0 {
                terms.push((Ordinal::nat(2u32), BigUint::from(a)));
            }
            if b > 0 {
                terms.push((Ordinal::nat(1u32), BigUint::from(b)));
            }
            if c > 0 {
                terms.push((Ordinal::zero(), BigUint::from(c)));
            }
            Ordinal::from_terms(terms).unwrap()
        };
        for a1 in 0..4u32 {
            for b1 in 0..4u32 {
                for c1 in 0..4u32 {
                    for a2 in 0..4u32 {
                        for b2 in 0..4u32 {
                            for c2 in 0..4u32 {
                                let lhs = build(a1, b1, c1);
                                let rhs = build(a2, b2, c2);
                                let expect = (a1, b1, c1).cmp(&(a2, b2, c2));
                                assert_eq!(lhs.compare(&rhs), expect, "{lhs} vs {rhs}");
                            }
                        }
                    }
                }
            }
        }
        // the spec's spot value
        assert_eq!(build(3, 5, 0).compare(&build(3, 4, 9)), Ordering::Greater);
    }

    #[test]
    fn fundamental_examples() {
        let x3 = BigUint::from(3u32);
        assert_eq!(ord("w^2").fundamental(&x3).unwrap(), ord("w*3"));
        assert_eq!(ord("w^w").fundamental(&BigUint::from(2u32)).unwrap(), ord("w^2*2"));
        assert_eq!(ord("5").fundamental(&BigUint::from(9u32)).unwrap(), ord("4"));
        assert!(Ordinal::zero().fundamental(&x3).is_err());
    }

    #[test]
    fn fundamental_strictly_below() {
        for s in ["1", "w", "w*2+1", "w^2*3+w*5", "w^w", "w^(w^2*3+1)*4+w*2+7"] {
            let a = ord(s);
            for x in 0u32..5 {
                let fx = a.fundamental(&BigUint::from(x)).unwrap();
                assert!(fx < a, "{fx} should be < {a}");
            }
        }
    }

    #[test]
    fn sums_and_products() {
        let a = ord("w^2+3");
        let b = ord("w*2+1");
        assert_eq!(a.natural_sum(&b), ord("w^2+w*2+4"));
        assert_eq!(a.natural_sum(&Ordinal::zero()), a);
        assert_eq!(ord("w+1").natural_sum(&ord("w")), ord("w*2+1"));

        let w1 = ord("w+1");
        assert_eq!(w1.natural_prod(&w1), ord("w^2+w*2+1"));
        assert_eq!(w1.natural_prod(&Ordinal::one()), w1);
        assert_eq!(Ordinal::omega().natural_prod(&Ordinal::omega()), ord("w^2"));

        assert_eq!(Ordinal::one().left_sum(&Ordinal::omega()), ord("w"));
        assert_eq!(Ordinal::omega().left_sum(&Ordinal::one()), ord("w+1"));
        assert_eq!(ord("w^2+w").left_sum(&ord("w*3+2")), ord("w^2+w*4+2"));
    }

    #[test]
    fn coord_bounds() {
        assert_eq!(Ordinal::zero().coord_bound(), BigUint::ZERO);
        assert_eq!(ord("w^2*3+w*5").coord_bound(), BigUint::from(5u32));
        assert_eq!(ord("w^(w*4)*2").coord_bound(), BigUint::from(4u32));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0", "7", "w", "w*2", "w+1", "w^2*3+w*5", "w^(w^2*3+1)*4+w*2+7", "w^w"] {
            let a = ord(s);
            let printed = a.to_string();
            assert_eq!(ord(&printed), a);
        }
    }
}
