//! Ordinal rank assignments for bad Dickson sequences, bad leader sequences,
//! and autoreduced-set rank sequences.
//!
//! A bad Dickson sequence is assigned the maximal order type of its residual
//! (the downward-closed set of vectors that no earlier entry dominates),
//! computed from the canonical decomposition of the residual into maximal
//! boxes: a box contributes `w^d * p` where `d` counts its infinite axes and
//! `p` multiplies out the finite ones, and boxes combine by natural sum.
//! The assignment satisfies: empty sequence maps to `w^n`, every one-step
//! extension strictly decreases it, and coefficients stay bounded by the
//! entry sizes. Bad leader sequences split per indeterminate and combine by
//! natural sum; autoreduced rank sequences stack those values as exponents.

use super::{Ordinal, OrdinalError};
use crate::diffring::Derivative;
use num::BigUint;

/// Largest vector dimension for which residual order types are computed.
pub const MAX_RESIDUAL_DIM: usize = 3;

/// A strictly rank-increasing sequence of derivatives in which no entry is a
/// derivative of an earlier one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadLeaderSeq {
    entries: Vec<Derivative>,
}

impl BadLeaderSeq {
    pub fn new(entries: Vec<Derivative>, n: usize, m: usize) -> Result<Self, OrdinalError> {
        for u in &entries {
            if u.indeterminate() == 0 || u.indeterminate() > n {
                return Err(OrdinalError::Domain(format!(
                    "derivative {} outside 1..={} indeterminates",
                    u, n
                )));
            }
            if u.exponents().len() != m {
                return Err(OrdinalError::Domain(format!(
                    "derivative {} does not use {} derivations",
                    u, m
                )));
            }
        }
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                if entries[i].derives(&entries[j]) {
                    return Err(OrdinalError::Domain(format!(
                        "{} is a derivative of {}",
                        entries[j], entries[i]
                    )));
                }
            }
            if i + 1 < entries.len() && !entries[i].ranked_below(&entries[i + 1]) {
                return Err(OrdinalError::Domain(format!(
                    "entries not strictly increasing in the ranking at position {}",
                    i + 1
                )));
            }
        }
        Ok(BadLeaderSeq { entries })
    }

    pub fn entries(&self) -> &[Derivative] {
        &self.entries
    }
}

fn dominated(p: &[u64], q: &[u64]) -> bool {
    p.iter().zip(q).all(|(a, b)| a <= b)
}

/// Essential-cylinder count of the residual `N^n \ up(A)` for a coordinate
/// subset `S` (given as a bitmask): the number of base points `x` over the
/// complementary coordinates whose full `S`-cylinder lies in the residual
/// while the ray from `x` leaves it in every remaining direction.
///
/// A base point is in the residual's `S`-cylinder set iff no obstruction,
/// restricted to the complementary coordinates, lies below it; the ray in
/// direction `i` leaves iff some obstruction restricted to the remaining
/// coordinates lies below it. Essential points have every coordinate
/// strictly below some obstruction entry, so the search range is finite.
fn essential_count(minimal: &[Vec<u64>], n: usize, mask: u32) -> BigUint {
    let bar: Vec<usize> = (0..n).filter(|i| mask & (1 << i) == 0).collect();
    if bar.is_empty() {
        // the full cylinder is the whole space; it survives iff there are
        // no obstructions at all
        return if minimal.is_empty() { BigUint::from(1u32) } else { BigUint::ZERO };
    }
    let max_entry = minimal
        .iter()
        .flat_map(|p| p.iter().copied())
        .max()
        .unwrap_or(0);
    let mut count: u64 = 0;
    let mut x = vec![0u64; bar.len()];
    'outer: loop {
        let in_fix = !minimal
            .iter()
            .any(|a| bar.iter().zip(&x).all(|(&i, &xi)| a[i] <= xi));
        if in_fix {
            let essential = bar.iter().enumerate().all(|(pos, _)| {
                minimal.iter().any(|a| {
                    bar.iter()
                        .zip(&x)
                        .enumerate()
                        .all(|(q, (&i, &xi))| q == pos || a[i] <= xi)
                })
            });
            if essential {
                count += 1;
            }
        }
        // odometer over [0, max_entry]^{bar}
        let mut pos = 0;
        loop {
            if pos == x.len() {
                break 'outer;
            }
            if x[pos] < max_entry {
                x[pos] += 1;
                break;
            }
            x[pos] = 0;
            pos += 1;
        }
    }
    BigUint::from(count)
}

/// Ordinal assigned to a bad Dickson sequence in `N^n`: the natural sum
/// `#_S w^|S| * E_S` over essential-cylinder counts of the residual. The
/// empty sequence maps to exactly `w^n`, and every one-step extension
/// strictly decreases the value (removing an up-set either shrinks the top
/// affected layer's essential set or breaks a ray, which cascades a strict
/// shrink one layer up).
pub fn bad_dickson_ordinal(seq: &[Vec<u64>], n: usize) -> Result<Ordinal, OrdinalError> {
    if n > MAX_RESIDUAL_DIM {
        return Err(OrdinalError::UnsupportedDimension { max: MAX_RESIDUAL_DIM, got: n });
    }
    for entry in seq {
        if entry.len() != n {
            return Err(OrdinalError::Domain(format!(
                "entry of dimension {} in a dimension-{} sequence",
                entry.len(),
                n
            )));
        }
    }
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len() {
            if dominated(&seq[i], &seq[j]) {
                return Err(OrdinalError::Domain(format!(
                    "not a bad Dickson sequence: entry {} <= entry {}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let mut minimal: Vec<Vec<u64>> = Vec::new();
    for p in seq {
        if !seq.iter().any(|q| q != p && dominated(q, p)) && !minimal.contains(p) {
            minimal.push(p.clone());
        }
    }
    let mut o = Ordinal::zero();
    for mask in 0..(1u32 << n) {
        let count = essential_count(&minimal, n, mask);
        if count != BigUint::ZERO {
            let layer = mask.count_ones() as u64;
            o = o.natural_sum(&Ordinal::omega_pow_mul(Ordinal::nat(layer), count));
        }
    }
    Ok(o)
}

/// Ordinal assigned to a bad leader sequence over `n` indeterminates and `m`
/// derivations: the natural sum of the per-indeterminate Dickson ordinals of
/// the exponent vectors. The empty sequence maps to `w^m * n`.
pub fn bad_leader_ordinal(seq: &BadLeaderSeq, n: usize, m: usize) -> Result<Ordinal, OrdinalError> {
    if m > MAX_RESIDUAL_DIM {
        return Err(OrdinalError::UnsupportedDimension { max: MAX_RESIDUAL_DIM, got: m });
    }
    let mut total = Ordinal::zero();
    for indet in 1..=n {
        let sub: Vec<Vec<u64>> = seq
            .entries()
            .iter()
            .filter(|u| u.indeterminate() == indet)
            .map(|u| u.exponents().iter().map(|&e| e as u64).collect())
            .collect();
        total = total.natural_sum(&bad_dickson_ordinal(&sub, m)?);
    }
    Ok(total)
}

/// Ordinal assigned to the rank sequence `Gamma(Lambda)` of an autoreduced
/// set: `sum_i w^o(mu_1..mu_i) * b_i + w^o(mu_1..mu_r)`, where the exponents
/// are bad-leader ordinals of the leader prefixes. Lower-rank sequences get
/// strictly smaller ordinals whenever the underlying leader assignment is
/// monotone at the point of first difference.
pub fn autoreduced_ordinal(
    gamma: &[(Derivative, u64)],
    n: usize,
    m: usize,
) -> Result<Ordinal, OrdinalError> {
    let leaders: Vec<Derivative> = gamma.iter().map(|(u, _)| u.clone()).collect();
    for (_, deg) in gamma {
        if *deg == 0 {
            return Err(OrdinalError::Domain("leader degree must be positive".into()));
        }
    }
    // validates the bad-leader structure of the full sequence
    let full = BadLeaderSeq::new(leaders.clone(), n, m)?;
    let mut o = Ordinal::zero();
    for i in 1..=gamma.len() {
        let prefix = BadLeaderSeq::new(leaders[..i].to_vec(), n, m)?;
        let e = bad_leader_ordinal(&prefix, n, m)?;
        o = o.left_sum(&Ordinal::omega_pow_mul(e, gamma[i - 1].1));
    }
    let tail = bad_leader_ordinal(&full, n, m)?;
    Ok(o.left_sum(&Ordinal::omega_pow(tail)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn empty_sequence_is_omega_pow_n() {
        assert_eq!(bad_dickson_ordinal(&[], 2).unwrap(), ord("w^2"));
        assert_eq!(bad_dickson_ordinal(&[], 1).unwrap(), ord("w"));
        assert_eq!(bad_dickson_ordinal(&[], 3).unwrap(), ord("w^3"));
    }

    #[test]
    fn zero_vector_kills_the_residual() {
        assert_eq!(bad_dickson_ordinal(&[vec![0, 0]], 2).unwrap(), Ordinal::zero());
    }

    #[test]
    fn one_one_residual() {
        // residual of <(1,1)> is the row and column through the origin
        assert_eq!(bad_dickson_ordinal(&[vec![1, 1]], 2).unwrap(), ord("w*2"));
    }

    #[test]
    fn rejects_good_pairs() {
        assert!(bad_dickson_ordinal(&[vec![1, 0], vec![1, 1]], 2).is_err());
    }

    #[test]
    fn strictly_decreases_under_extension_exhaustive() {
        // all bad sequences with entries in [0,3]^2, up to length 3
        let entries: Vec<Vec<u64>> = (0..4u64)
            .flat_map(|a| (0..4u64).map(move |b| vec![a, b]))
            .collect();
        let mut frontier: Vec<Vec<Vec<u64>>> = vec![vec![]];
        for _ in 0..3 {
            let mut next = Vec::new();
            for seq in &frontier {
                let here = bad_dickson_ordinal(seq, 2).unwrap();
                for e in &entries {
                    let mut ext = seq.clone();
                    ext.push(e.clone());
                    if let Ok(o) = bad_dickson_ordinal(&ext, 2) {
                        assert!(o < here, "extension by {:?} did not decrease: {} -> {}", e, here, o);
                        next.push(ext);
                    }
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn coefficients_stay_bounded() {
        // |o(seq)| <= m * (k+1)^n for entries bounded by k
        let entries: Vec<Vec<u64>> = (0..4u64)
            .flat_map(|a| (0..4u64).map(move |b| vec![a, b]))
            .collect();
        let mut frontier: Vec<Vec<Vec<u64>>> = vec![vec![]];
        for _ in 0..3 {
            let mut next = Vec::new();
            for seq in &frontier {
                for e in &entries {
                    let mut ext = seq.clone();
                    ext.push(e.clone());
                    if let Ok(o) = bad_dickson_ordinal(&ext, 2) {
                        let k = ext.iter().flat_map(|v| v.iter()).max().copied().unwrap_or(0);
                        let bound = BigUint::from(ext.len() as u64) * BigUint::from((k + 1).pow(2));
                        assert!(
                            o.coord_bound() <= bound,
                            "|{}| > {} for {:?}",
                            o,
                            bound,
                            ext
                        );
                        next.push(ext);
                    }
                }
            }
            frontier = next;
        }
    }
}
