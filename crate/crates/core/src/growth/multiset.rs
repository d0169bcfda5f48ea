//! Finite multisets over the naturals and the length recursion they drive.
//!
//! A step removes one copy of an element `k > 0` and introduces
//! `k * (D(i) - 1)` copies of `k - 1` (a copy of 0 is simply removed). The
//! recursion `m(tau, i) = 1 + m(step(tau, min tau, i), i + 1)` counts the
//! total number of steps to empty the multiset.

use super::MonotoneFn;
use crate::budget::{Budget, Eval, ResidueReason, StepMeter};
use num::BigUint;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Finite multiset over the naturals; multiplicities are arbitrary-precision
/// because the recursion inflates them savagely.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Multiset {
    counts: BTreeMap<u64, BigUint>,
}

impl Multiset {
    pub fn empty() -> Self {
        Multiset::default()
    }

    pub fn from_elems(elems: &[u64]) -> Self {
        let mut counts: BTreeMap<u64, BigUint> = BTreeMap::new();
        for &e in elems {
            *counts.entry(e).or_default() += 1u32;
        }
        Multiset { counts }
    }

    pub fn singleton(value: u64) -> Self {
        Multiset::from_elems(&[value])
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn insert_many(&mut self, value: u64, copies: BigUint) {
        if copies != BigUint::ZERO {
            *self.counts.entry(value).or_default() += copies;
        }
    }

    pub fn multiplicity(&self, value: u64) -> BigUint {
        self.counts.get(&value).cloned().unwrap_or(BigUint::ZERO)
    }

    pub fn min(&self) -> Option<u64> {
        self.counts.keys().next().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Total size `|tau|`.
    pub fn size(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn counts(&self) -> &BTreeMap<u64, BigUint> {
        &self.counts
    }

    /// Removes every copy of `value`.
    pub fn remove_all(&mut self, value: u64) {
        self.counts.remove(&value);
    }

    pub fn remove_one(&mut self, value: u64) -> bool {
        match self.counts.get_mut(&value) {
            None => false,
            Some(c) => {
                if *c == BigUint::from(1u32) {
                    self.counts.remove(&value);
                } else {
                    *c -= 1u32;
                }
                true
            }
        }
    }

    /// One step: remove a copy of `k`, add `k * (D(i) - 1)` copies of `k-1`.
    pub fn step(&self, k: u64, i: &BigUint, d: &MonotoneFn) -> Result<Multiset, String> {
        let mut next = self.clone();
        if !next.remove_one(k) {
            return Err(format!("{k} is not in the multiset"));
        }
        if k > 0 {
            let di = d.eval(i);
            let copies = BigUint::from(k) * (di - 1u32);
            next.insert_many(k - 1, copies);
        }
        Ok(next)
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (v, c) in self.counts.iter().rev() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            if *c == BigUint::from(1u32) {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{c}")?;
            }
        }
        write!(f, "}}")
    }
}

/// The multiset order: compare multiplicities at the greatest value where
/// they differ.
pub fn multi_compare(a: &Multiset, b: &Multiset) -> Ordering {
    let keys: std::collections::BTreeSet<u64> =
        a.counts.keys().chain(b.counts.keys()).copied().collect();
    for k in keys.iter().rev() {
        let (ca, cb) = (a.multiplicity(*k), b.multiplicity(*k));
        match ca.cmp(&cb) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Exact evaluation of the multiset length recursion. Runs of zeros are
/// consumed in one batch so astronomically many trailing removals stay cheap;
/// a residue reports the steps already counted as a certified lower bound.
pub fn frak_m(tau: &Multiset, d: &MonotoneFn, i: &BigUint, budget: &Budget) -> Eval {
    let mut tau = tau.clone();
    let mut i = i.clone();
    let mut count = BigUint::ZERO;
    let mut meter = StepMeter::new(budget);
    while let Some(k) = tau.min() {
        if k == 0 {
            // removing zeros only increments the counters
            let zeros = tau.multiplicity(0);
            if !meter.charge(&zeros) {
                return Eval::residue(count, ResidueReason::StepsExceeded, "m");
            }
            count += &zeros;
            i += &zeros;
            tau.counts.remove(&0);
            continue;
        }
        if !meter.charge_one() {
            return Eval::residue(count, ResidueReason::StepsExceeded, "m");
        }
        tau = tau.step(k, &i, d).expect("min element present");
        count += 1u32;
        i += 1u32;
        if !budget.admits(&tau.size()) {
            return Eval::residue(count, ResidueReason::BitsExceeded, "m");
        }
    }
    Eval::Exact(count)
}

/// `m*(D, n) = m({n}, D+1)(0) + 1`.
pub fn frak_m_star(d: &MonotoneFn, n: u64, budget: &Budget) -> Eval {
    let tau = Multiset::singleton(n);
    match frak_m(&tau, &d.plus_one(), &BigUint::ZERO, budget) {
        Eval::Exact(v) => Eval::Exact(v + 1u32),
        Eval::Residue(mut r) => {
            r.frontier = "m*".into();
            Eval::Residue(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn worked_example_step() {
        // {3,3,2} with k=3 gives {3} plus 3(D(i)-1)+1 copies of 2
        let d = MonotoneFn::affine(1, 2); // D(i) = i + 2
        let tau = Multiset::from_elems(&[3, 3, 2]);
        let stepped = tau.step(3, &big(1), &d).unwrap();
        assert_eq!(stepped.multiplicity(3), big(1));
        assert_eq!(stepped.multiplicity(2), big(3 * (3 - 1) + 1));
    }

    #[test]
    fn zero_removal() {
        let d = MonotoneFn::affine(1, 2);
        let tau = Multiset::singleton(0);
        assert!(tau.step(0, &big(0), &d).unwrap().is_empty());
    }

    #[test]
    fn one_expands_to_zeros() {
        // {1} with D(i) = 4 gives three copies of 0
        let d = MonotoneFn::affine(0, 4);
        let tau = Multiset::singleton(1);
        let stepped = tau.step(1, &big(0), &d).unwrap();
        assert_eq!(stepped.multiplicity(0), big(3));
    }

    #[test]
    fn multiset_order_examples() {
        let a = Multiset::from_elems(&[1, 1, 1, 1, 1]);
        let b = Multiset::from_elems(&[2]);
        assert_eq!(multi_compare(&a, &b), Ordering::Less);
        let c = Multiset::from_elems(&[3, 1, 0]);
        let d = Multiset::from_elems(&[3, 2]);
        assert_eq!(multi_compare(&c, &d), Ordering::Less);
        assert_eq!(multi_compare(&c, &c), Ordering::Equal);
    }

    #[test]
    fn step_decreases_in_multiset_order() {
        // walk a prefix of the recursion; the full walk from {3,3,2} is
        // astronomically long
        let d = MonotoneFn::affine(1, 2);
        let tau = Multiset::from_elems(&[3, 3, 2]);
        let mut cur = tau.clone();
        let mut i = big(0);
        for _ in 0..300 {
            let Some(k) = cur.min() else { break };
            let next = cur.step(k, &i, &d).unwrap();
            assert_eq!(multi_compare(&next, &cur), Ordering::Less);
            cur = next;
            i += 1u32;
        }
    }

    #[test]
    fn paper_worked_value() {
        // m_{{2}, i -> i+2}(0) = 10
        let d = MonotoneFn::affine(1, 2);
        let v = frak_m(&Multiset::singleton(2), &d, &BigUint::ZERO, &Budget::default());
        assert_eq!(v, Eval::Exact(big(10)));
    }

    #[test]
    fn empty_multiset_is_zero() {
        let d = MonotoneFn::affine(1, 2);
        let v = frak_m(&Multiset::empty(), &d, &big(5), &Budget::default());
        assert_eq!(v, Eval::Exact(BigUint::ZERO));
    }

    #[test]
    fn two_zeros_take_two_steps() {
        let d = MonotoneFn::affine(1, 2);
        let v = frak_m(&Multiset::from_elems(&[0, 0]), &d, &big(5), &Budget::default());
        assert_eq!(v, Eval::Exact(big(2)));
    }

    #[test]
    fn m_star_base_cases() {
        let d = MonotoneFn::affine(1, 1); // D(i) = i + 1
        let b = Budget::default();
        // n = 0: {0} removes in one step, plus one
        assert_eq!(frak_m_star(&d, 0, &b), Eval::Exact(big(2)));
        // n = 1 with D+1 = i+2: {1} -> {0} at i=1 -> {} : 2 steps, plus one
        // (independent unroll: 1*(D'(0)-1) = 1 copy of 0)
        assert_eq!(frak_m_star(&d, 1, &b), Eval::Exact(big(3)));
    }

    #[test]
    fn m_star_frozen_unrolls() {
        // independent recursive unroll oracle, then frozen
        fn unroll(tau: &Multiset, d: &MonotoneFn, i: u64) -> u64 {
            match tau.min() {
                None => 0,
                Some(k) => {
                    let next = tau.step(k, &BigUint::from(i), d).unwrap();
                    1 + unroll(&next, d, i + 1)
                }
            }
        }
        let dplus = MonotoneFn::affine(1, 2); // (i+1)+1
        let direct = unroll(&Multiset::singleton(1), &dplus, 0) + 1;
        assert_eq!(
            frak_m_star(&MonotoneFn::affine(1, 1), 1, &Budget::default()),
            Eval::Exact(big(direct))
        );
        let dplus2 = MonotoneFn::affine(1, 2);
        let direct2 = unroll(&Multiset::singleton(2), &dplus2, 0) + 1;
        assert_eq!(
            frak_m_star(&MonotoneFn::affine(1, 1), 2, &Budget::default()),
            Eval::Exact(big(direct2))
        );
    }
}
