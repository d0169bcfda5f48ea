//! Sparse exact-rational multivariate polynomials and the bounded-degree
//! linear-algebra method: ideal membership with degree certificates, syzygy
//! generators, chain witnesses, and radical-membership constructions.

mod linalg;
mod membership;
mod noether;
mod radical;
mod text;

pub use membership::{
    membership_bounded, module_membership, syzygy_generators, syzygy_generators_system,
    MembershipCert,
};
pub use noether::{dickson_witness, hilbert_chain_witness, DicksonReport, HilbertReport, VectorStream};
pub use radical::{prime_up_to_check, rabinowitsch_bound_check, radical_tree, PrimeViolation, RadicalCert};
pub use text::ParsePolyError;

use num::{BigRational, One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("ring mismatch: {0} vs {1} variables")]
    RingMismatch(usize, usize),
    #[error("{0}")]
    Domain(String),
    #[error("norm precondition violated at index {index}: |{vector:?}| > bound {bound}")]
    NormViolated { index: usize, vector: Vec<u64>, bound: u64 },
    #[error("factor oracle returned no answer")]
    OracleUnknown,
}

/// Exponent vector ordered by graded lexicographic order (degree first,
/// then earlier variables weigh less).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
        } else {
            None
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        // degree first; within a degree the first differing exponent
        // decides, smaller exponent first (so x2 < x1)
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate polynomial over the rationals with a fixed variable
/// count.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::constant(n_vars), c);
        }
        Poly { n_vars, terms }
    }

    pub fn one(n_vars: usize) -> Self {
        Poly::constant(n_vars, BigRational::one())
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        Poly::from_monomial(n_vars, Monomial::var(n_vars, i), BigRational::one())
    }

    pub fn from_monomial(n_vars: usize, m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { n_vars, terms }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn check_ring(&self, other: &Poly) -> Result<(), PolyError> {
        if self.n_vars != other.n_vars {
            return Err(PolyError::RingMismatch(self.n_vars, other.n_vars));
        }
        Ok(())
    }

    fn insert(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.n_vars, rhs.n_vars);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Self::insert(&mut terms, m.clone(), c.clone());
        }
        Poly { n_vars: self.n_vars, terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.n_vars, rhs.n_vars);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                Self::insert(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        Poly { n_vars: self.n_vars, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Poly {
        let mut acc = Poly::one(self.n_vars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Substitutes a polynomial for variable `i`.
    pub fn substitute(&self, i: usize, value: &Poly) -> Result<Poly, PolyError> {
        self.check_ring(value)?;
        let mut acc = Poly::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut rest = m.clone();
            rest.0[i] = 0;
            let term = Poly::from_monomial(self.n_vars, rest, c.clone()).mul(&value.pow(e as u64));
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Leading monomial in graded lexicographic order.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn parse(n_vars: usize, s: &str) -> Result<Poly, ParsePolyError> {
        text::parse_poly(n_vars, s)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_poly(self, f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// All monomials in `n` variables of total degree at most `d`, ascending.
pub fn monomials_up_to(n_vars: usize, d: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_vars];
    loop {
        let deg: u64 = cur.iter().map(|&e| e as u64).sum();
        if deg <= d {
            out.push(Monomial(cur.clone()));
        }
        // odometer over [0..=d]^n, pruned by degree at push time
        let mut i = 0;
        loop {
            if i == n_vars {
                out.sort();
                return out;
            }
            if (cur[i] as u64) < d {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Poly {
        Poly::parse(n, s).unwrap()
    }

    #[test]
    fn product_of_sum_and_difference() {
        let lhs = p(2, "x1 + x2").mul(&p(2, "x1 - x2"));
        assert_eq!(lhs, p(2, "x1^2 - x2^2"));
    }

    #[test]
    fn degrees_and_substitution() {
        assert_eq!(p(2, "x1^2*x2 + 3").total_degree(), 3);
        let f = p(2, "x1^2");
        assert_eq!(f.substitute(0, &p(2, "x2")).unwrap(), p(2, "x2^2"));
    }

    #[test]
    fn graded_order() {
        // 1 < x2 < x1 < x2^2 < x1 x2 < x1^2
        let ms = monomials_up_to(2, 2);
        let degs: Vec<u64> = ms.iter().map(Monomial::degree).collect();
        assert_eq!(degs, vec![0, 1, 1, 2, 2, 2]);
        assert_eq!(ms[1], Monomial(vec![0, 1]));
        assert_eq!(ms[2], Monomial(vec![1, 0]));
        assert_eq!(ms[3], Monomial(vec![0, 2]));
        assert_eq!(ms[4], Monomial(vec![1, 1]));
        assert_eq!(ms[5], Monomial(vec![2, 0]));
    }

    #[test]
    fn monomial_count() {
        // C(d+n, n) monomials of degree <= d
        assert_eq!(monomials_up_to(3, 4).len(), 35);
    }

    #[test]
    fn parse_print_roundtrip() {
        for s in ["3/2*x1^2*x2 - x3 + 1", "x1", "-x1 - 1", "0"] {
            let f = p(3, s);
            assert_eq!(Poly::parse(3, &f.to_string()).unwrap(), f);
        }
    }
}
