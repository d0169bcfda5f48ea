//! Autoreduced sets, the autoreduction procedure, and coherence repair.

use super::poly::DiffPoly;
use super::reduce::{delta_s_poly, pseudodivide, PseudoDivCert};
use super::{Derivative, DiffError};
use num::BigUint;
use std::cmp::Ordering;

/// A rank-sorted, pairwise-reduced set of nonconstant differential
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutoreducedSet {
    elements: Vec<DiffPoly>,
}

impl AutoreducedSet {
    pub fn new(mut elements: Vec<DiffPoly>) -> Result<Self, DiffError> {
        for f in &elements {
            if f.is_constant() {
                return Err(DiffError::Domain(
                    "autoreduced sets contain no base-field elements".into(),
                ));
            }
        }
        elements.sort_by(|a, b| a.rank_cmp(b));
        for i in 0..elements.len() {
            for j in 0..elements.len() {
                if i != j && !elements[i].reduced_wrt(&elements[j])? {
                    return Err(DiffError::Domain(format!(
                        "element {} is not reduced with respect to element {}",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        let set = AutoreducedSet { elements };
        set.assert_cardinality_bound();
        Ok(set)
    }

    pub fn elements(&self) -> &[DiffPoly] {
        &self.elements
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Least `b` with the whole set inside `K{X}_{<=b}`.
    pub fn containment_bound(&self) -> u64 {
        self.elements.iter().map(|f| f.containment_bound()).max().unwrap_or(0)
    }

    /// `|set| <= C(2b, b)`, the monomial-count bound.
    fn assert_cardinality_bound(&self) {
        let b = self.containment_bound();
        let bound = binomial(2 * b, b);
        assert!(
            BigUint::from(self.elements.len()) <= bound,
            "autoreduced set of {} elements exceeds C(2b,b) with b = {}",
            self.elements.len(),
            b
        );
    }

    /// The rank sequence `Gamma`: leaders with their degrees, ascending.
    pub fn rank_seq(&self) -> Vec<(Derivative, u64)> {
        self.elements
            .iter()
            .map(|f| {
                let (u, d) = f.rank().expect("nonconstant");
                (u, d as u64)
            })
            .collect()
    }

    /// Product of initials and separants.
    pub fn h_product(&self) -> Result<DiffPoly, DiffError> {
        let ctx = self
            .elements
            .first()
            .map(|f| f.ctx())
            .ok_or_else(|| DiffError::Domain("H of an empty set needs a context".into()))?;
        let mut h = DiffPoly::one(ctx);
        for f in &self.elements {
            h = h.mul(&f.initial()?).mul(&f.separant()?);
        }
        Ok(h)
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k.min(n - k) {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Compares rank sequences: first differing (leader, degree) pair decides;
/// with equal prefixes the longer sequence is the lower one.
pub fn rank_seq_cmp(a: &[(Derivative, u64)], b: &[(Derivative, u64)]) -> Ordering {
    for ((ua, da), (ub, db)) in a.iter().zip(b.iter()) {
        let c = ua.rank_cmp(ub).then(da.cmp(db));
        if c != Ordering::Equal {
            return c;
        }
    }
    // proper prefix: the extension has lower rank
    b.len().cmp(&a.len())
}

/// Greedy minimal-rank autoreduced subset: repeatedly take the lowest-rank
/// element reduced with respect to everything already chosen.
///
/// With rank ties among candidates the greedy pick need not realize the
/// minimum (a tied representative can block a longer continuation), so the
/// procedures below never rely on it alone for descent; see
/// [`descend_with`].
pub fn minimal_rank_subset(candidates: &[DiffPoly]) -> Result<AutoreducedSet, DiffError> {
    let mut sorted: Vec<&DiffPoly> = candidates.iter().filter(|f| !f.is_constant()).collect();
    sorted.sort_by(|a, b| a.rank_cmp(b));
    let mut chosen: Vec<DiffPoly> = Vec::new();
    'next: for f in sorted {
        if f.is_zero() {
            continue;
        }
        for g in &chosen {
            if !f.reduced_wrt(g)? {
                continue 'next;
            }
        }
        chosen.push((*f).clone());
    }
    AutoreducedSet::new(chosen)
}

/// The next set of a repair round: a minimal-rank autoreduced subset of the
/// pool when the greedy one already descends, otherwise the guaranteed
/// descent step — the elements of `current` below the adjoined remainder,
/// plus the remainder itself. The remainder is reduced with respect to all
/// of `current`, so that set is autoreduced and of strictly lower rank.
pub(super) fn descend_with(
    current: &AutoreducedSet,
    pool: &[DiffPoly],
    adjoin: &DiffPoly,
) -> Result<AutoreducedSet, DiffError> {
    let mut pool2 = pool.to_vec();
    pool2.push(adjoin.clone());
    let greedy = minimal_rank_subset(&pool2)?;
    if rank_seq_cmp(&greedy.rank_seq(), &current.rank_seq()) == Ordering::Less {
        return Ok(greedy);
    }
    let mut witness: Vec<DiffPoly> = current
        .elements()
        .iter()
        .filter(|g| g.rank_cmp(adjoin) == Ordering::Less)
        .cloned()
        .collect();
    witness.push(adjoin.clone());
    let next = AutoreducedSet::new(witness)?;
    debug_assert_eq!(
        rank_seq_cmp(&next.rank_seq(), &current.rank_seq()),
        Ordering::Less,
        "witness set must lower the rank"
    );
    Ok(next)
}

/// Transcript of an autoreduction or coherence run.
#[derive(Clone, Debug)]
pub struct AutoreduceRun {
    pub result: AutoreducedSet,
    /// Rank sequence of every intermediate set, strictly descending.
    pub iterations: Vec<Vec<(Derivative, u64)>>,
    /// Final zero-remainder certificates, one per input element.
    pub zero_certs: Vec<PseudoDivCert>,
}

/// Produces an autoreduced set against which every input pseudodivides to 0.
///
/// Repeatedly: take a minimal-rank autoreduced subset; if some input has a
/// nonzero remainder, adjoin the remainder and re-select. Ranks strictly
/// decrease, so this terminates.
pub fn autoreduce(input: &[DiffPoly]) -> Result<AutoreduceRun, DiffError> {
    for f in input {
        if f.is_constant() && !f.is_zero() {
            return Err(DiffError::Domain("input contains a base-field constant".into()));
        }
    }
    let mut pool: Vec<DiffPoly> = input.iter().filter(|f| !f.is_zero()).cloned().collect();
    let mut current = minimal_rank_subset(&pool)?;
    let mut iterations = vec![current.rank_seq()];
    loop {
        let mut certs = Vec::new();
        let mut new_remainder: Option<DiffPoly> = None;
        for f in input.iter().filter(|f| !f.is_zero()) {
            let cert = pseudodivide(f, &current)?;
            if cert.remainder.is_zero() {
                certs.push(cert);
            } else {
                new_remainder = Some(cert.remainder.clone());
                break;
            }
        }
        match new_remainder {
            None => {
                return Ok(AutoreduceRun { result: current, iterations, zero_certs: certs });
            }
            Some(r) => {
                if r.is_constant() {
                    return Err(DiffError::UnitIdeal);
                }
                let next = descend_with(&current, &pool, &r)?;
                pool.push(r);
                let decreased =
                    rank_seq_cmp(&next.rank_seq(), &current.rank_seq()) == Ordering::Less;
                assert!(decreased, "autoreduce iteration did not lower the rank");
                iterations.push(next.rank_seq());
                current = next;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoherenceMode {
    /// Stop when all delta-S-polynomials reduce to 0.
    Plain,
    /// Additionally require every original element to reduce to 0.
    Containment,
}

/// Repairs an autoreduced set into a reduction-coherent one: pseudodivide
/// every delta-S-polynomial of a common-leader pair and adjoin nonzero
/// remainders, re-selecting a minimal-rank subset each round.
pub fn coherent(start: &AutoreducedSet, mode: CoherenceMode) -> Result<AutoreduceRun, DiffError> {
    let mut pool: Vec<DiffPoly> = start.elements().to_vec();
    let mut current = start.clone();
    let mut iterations = vec![current.rank_seq()];
    loop {
        let mut offender: Option<DiffPoly> = None;
        'search: for i in 0..current.elements().len() {
            for j in (i + 1)..current.elements().len() {
                let f = &current.elements()[i];
                let g = &current.elements()[j];
                let (mu_f, mu_g) = (f.leader()?, g.leader()?);
                if mu_f.indeterminate() != mu_g.indeterminate() {
                    continue;
                }
                let delta = delta_s_poly(f, g, None)?;
                if delta.is_zero() {
                    continue;
                }
                let cert = pseudodivide(&delta, &current)?;
                if !cert.remainder.is_zero() {
                    offender = Some(cert.remainder);
                    break 'search;
                }
            }
        }
        if offender.is_none() && mode == CoherenceMode::Containment {
            for f in start.elements() {
                let cert = pseudodivide(f, &current)?;
                if !cert.remainder.is_zero() {
                    offender = Some(cert.remainder);
                    break;
                }
            }
        }
        match offender {
            None => {
                let mut zero_certs = Vec::new();
                if mode == CoherenceMode::Containment {
                    for f in start.elements() {
                        zero_certs.push(pseudodivide(f, &current)?);
                    }
                }
                return Ok(AutoreduceRun { result: current, iterations, zero_certs });
            }
            Some(r) => {
                if r.is_constant() {
                    return Err(DiffError::UnitIdeal);
                }
                let next = descend_with(&current, &pool, &r)?;
                pool.push(r);
                let decreased =
                    rank_seq_cmp(&next.rank_seq(), &current.rank_seq()) == Ordering::Less;
                assert!(decreased, "coherence iteration did not lower the rank");
                iterations.push(next.rank_seq());
                current = next;
            }
        }
    }
}

/// Checks reduction-coherence directly: every delta-S-polynomial of a
/// common-leader pair pseudodivides to zero.
pub fn is_reduction_coherent(set: &AutoreducedSet) -> Result<bool, DiffError> {
    for i in 0..set.elements().len() {
        for j in (i + 1)..set.elements().len() {
            let f = &set.elements()[i];
            let g = &set.elements()[j];
            if f.leader()?.indeterminate() != g.leader()?.indeterminate() {
                continue;
            }
            let delta = delta_s_poly(f, g, None)?;
            if delta.is_zero() {
                continue;
            }
            if !pseudodivide(&delta, set)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::DiffCtx;

    fn p(n: usize, m: usize, s: &str) -> DiffPoly {
        DiffPoly::parse(DiffCtx::new(n, m), s).unwrap()
    }

    #[test]
    fn u2_u3_autoreduces_to_u2() {
        let run = autoreduce(&[p(1, 1, "x1^2"), p(1, 1, "x1^3")]).unwrap();
        assert_eq!(run.result.elements(), &[p(1, 1, "x1^2")]);
    }

    #[test]
    fn fixpoint_on_autoreduced_input() {
        let f = p(2, 1, "x1^2 + x2");
        let run = autoreduce(&[f.clone()]).unwrap();
        assert_eq!(run.result.elements(), &[f]);
        assert_eq!(run.iterations.len(), 1);
    }

    #[test]
    fn derivative_pair_collapses() {
        // {d1 x1, x1 d1 x1 + x1} autoreduces to {x1}
        let run = autoreduce(&[p(1, 1, "d1 x1"), p(1, 1, "x1*d1 x1 + x1")]).unwrap();
        assert_eq!(run.result.elements(), &[p(1, 1, "x1")]);
        for cert in &run.zero_certs {
            assert!(cert.remainder.is_zero());
            cert.verify().unwrap();
        }
    }

    #[test]
    fn singleton_sets_are_coherent() {
        let set = AutoreducedSet::new(vec![p(2, 2, "d1 x1 + x2")]).unwrap();
        let run = coherent(&set, CoherenceMode::Plain).unwrap();
        assert_eq!(run.result, set);
    }

    #[test]
    fn no_common_leader_pairs_is_vacuous() {
        let set =
            AutoreducedSet::new(vec![p(2, 2, "d1 x1 + x2"), p(2, 2, "d2 x2 + x2")]).unwrap();
        // leaders d1 x1 and d2 x2 involve different indeterminates
        let run = coherent(&set, CoherenceMode::Plain).unwrap();
        assert_eq!(run.result, set);
        assert!(is_reduction_coherent(&run.result).unwrap());
    }

    #[test]
    fn rank_order_prefers_extensions() {
        let a = AutoreducedSet::new(vec![p(2, 1, "x1^2")]).unwrap();
        let b = AutoreducedSet::new(vec![p(2, 1, "x1^2"), p(2, 1, "x2")]).unwrap();
        assert_eq!(rank_seq_cmp(&b.rank_seq(), &a.rank_seq()), Ordering::Less);
    }
}
