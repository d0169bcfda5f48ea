//! Differential polynomial ring kernel.
//!
//! Fixes a field of characteristic 0 (here: the rationals, with the
//! derivations acting trivially on constants), `n` differential
//! indeterminates and `m` commuting derivations, and the orderly ranking:
//! derivatives are compared by total order, then by derivation exponents
//! (earlier derivations weigh less), then by indeterminate index.

mod autoreduce;
mod charset;
mod poly;
mod reduce;
mod stratified;
mod text;

pub use autoreduce::{
    autoreduce, coherent, is_reduction_coherent, minimal_rank_subset, rank_seq_cmp,
    AutoreduceRun, AutoreducedSet, CoherenceMode,
};
pub use charset::{
    char_set, CharSetAbort, CharSetConfig, CharSetRun, OracleAnswer, OracleEntry, TableOracle,
};
pub use poly::DiffPoly;
pub use reduce::{delta_s_poly, pseudodivide, pseudodivide_steps, PseudoDivCert};
pub use stratified::{order_stratum, stratified_membership, Stratum, StratifiedResult};
pub use text::ParseDiffPolyError;

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("{0}")]
    Domain(String),
    #[error("constant polynomial has no leader")]
    ConstantLeader,
    #[error("ring context mismatch: ({0},{1}) vs ({2},{3})")]
    CtxMismatch(usize, usize, usize, usize),
    #[error("derivation index {0} out of range 1..={1}")]
    BadDerivation(usize, usize),
    #[error("step budget exhausted after {0} steps")]
    StepsExhausted(u64),
    #[error("oracle answered 'unknown' for {0}")]
    OracleUnknown(String),
    #[error("oracle inconsistency: {0}")]
    OracleInconsistent(String),
    #[error("the inputs generate the unit ideal: a nonzero constant remainder appeared")]
    UnitIdeal,
}

/// Ring context: `n` indeterminates, `m` commuting derivations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiffCtx {
    pub n: usize,
    pub m: usize,
}

impl DiffCtx {
    pub fn new(n: usize, m: usize) -> Self {
        DiffCtx { n, m }
    }
}

/// A derivative `theta X_i`: derivation exponents applied to an
/// indeterminate. Order is the total derivation exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Derivative {
    exps: Vec<u32>,
    indet: usize, // 1-based
}

impl Derivative {
    pub fn new(indet: usize, exps: Vec<u32>) -> Self {
        Derivative { exps, indet }
    }

    /// The underived indeterminate `X_i`.
    pub fn indeterminate_only(indet: usize, m: usize) -> Self {
        Derivative { exps: vec![0; m], indet }
    }

    pub fn indeterminate(&self) -> usize {
        self.indet
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn order(&self) -> u64 {
        self.exps.iter().map(|&e| e as u64).sum()
    }

    /// Applies one more derivation `delta_i` (1-based).
    pub fn derive(&self, i: usize) -> Self {
        let mut exps = self.exps.clone();
        exps[i - 1] += 1;
        Derivative { exps, indet: self.indet }
    }

    /// True when some derivation theta maps `self` to `other`.
    pub fn derives(&self, other: &Derivative) -> bool {
        self.indet == other.indet
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Proper derivative: derives and differs.
    pub fn properly_derives(&self, other: &Derivative) -> bool {
        self.derives(other) && self != other
    }

    /// The derivation exponents carrying `self` to `other`, when they exist.
    pub fn theta_to(&self, other: &Derivative) -> Option<Vec<u32>> {
        if !self.derives(other) {
            return None;
        }
        Some(self.exps.iter().zip(&other.exps).map(|(a, b)| b - a).collect())
    }

    /// Least common derivative of two derivatives of one indeterminate.
    pub fn least_common(&self, other: &Derivative) -> Option<Derivative> {
        if self.indet != other.indet {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Some(Derivative { exps, indet: self.indet })
    }

    /// Orderly ranking: order first, then derivation exponents with the
    /// first differing exponent deciding (smaller first), then indeterminate.
    pub fn rank_cmp(&self, other: &Derivative) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| self.indet.cmp(&other.indet))
    }

    pub fn ranked_below(&self, other: &Derivative) -> bool {
        self.rank_cmp(other) == std::cmp::Ordering::Less
    }

    /// 1-based position in the orderly ranking of the `(n, m)` context.
    pub fn rank_index(&self, ctx: DiffCtx) -> u64 {
        let ord = self.order();
        let mut below: u64 = 0;
        for o in 0..ord {
            below += compositions(o, ctx.m);
        }
        below *= ctx.n as u64;
        let within = lex_position(&self.exps, ord);
        below + within * ctx.n as u64 + self.indet as u64
    }

    /// Inverse of [`rank_index`].
    pub fn from_rank_index(idx: u64, ctx: DiffCtx) -> Option<Derivative> {
        if idx == 0 {
            return None;
        }
        let mut rem = idx - 1;
        let mut order = 0u64;
        loop {
            let block = compositions(order, ctx.m) * ctx.n as u64;
            if rem < block {
                break;
            }
            rem -= block;
            order += 1;
        }
        let vec_pos = rem / ctx.n as u64;
        let indet = (rem % ctx.n as u64) as usize + 1;
        let exps = nth_composition(order, ctx.m, vec_pos);
        Some(Derivative { exps, indet })
    }
}

impl fmt::Display for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 1 {
                write!(f, "d{} ", i + 1)?;
            } else if e > 1 {
                write!(f, "d{}^{} ", i + 1, e)?;
            }
        }
        write!(f, "x{}", self.indet)
    }
}

/// Number of exponent vectors in `N^m` with coordinate sum `order`:
/// `C(order + m - 1, m - 1)`.
fn compositions(order: u64, m: usize) -> u64 {
    if m == 0 {
        return if order == 0 { 1 } else { 0 };
    }
    let mut acc: u128 = 1;
    for i in 0..(m as u64 - 1) {
        acc = acc * (order + i + 1) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Position (0-based) of `exps` among same-sum vectors in ascending
/// lexicographic order.
fn lex_position(exps: &[u32], total: u64) -> u64 {
    let mut pos = 0u64;
    let mut remaining = total;
    for (i, &e) in exps.iter().enumerate() {
        let tail = exps.len() - i - 1;
        for smaller in 0..(e as u64) {
            pos += compositions(remaining - smaller, tail);
        }
        remaining -= e as u64;
    }
    pos
}

/// The `pos`-th (0-based, ascending lex) exponent vector of sum `total`.
fn nth_composition(total: u64, m: usize, mut pos: u64) -> Vec<u32> {
    let mut exps = vec![0u32; m];
    let mut remaining = total;
    for i in 0..m {
        let tail = m - i - 1;
        let mut e = 0u64;
        loop {
            let c = compositions(remaining - e, tail);
            if pos < c {
                break;
            }
            pos -= c;
            e += 1;
        }
        exps[i] = e as u32;
        remaining -= e;
    }
    exps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_indices_one_indet_one_derivation() {
        let ctx = DiffCtx::new(1, 1);
        for e in 0..6u32 {
            let u = Derivative::new(1, vec![e]);
            assert_eq!(u.rank_index(ctx), e as u64 + 1);
            assert_eq!(Derivative::from_rank_index(e as u64 + 1, ctx), Some(u));
        }
    }

    #[test]
    fn remark_fifth_least() {
        // n=1, m=2: d2 x1 is second-least, d1 d2 x1 fifth-least
        let ctx = DiffCtx::new(1, 2);
        assert_eq!(Derivative::new(1, vec![0, 1]).rank_index(ctx), 2);
        assert_eq!(Derivative::new(1, vec![1, 1]).rank_index(ctx), 5);
    }

    #[test]
    fn order_one_count_two_indets() {
        let ctx = DiffCtx::new(2, 1);
        // order-1 derivatives: d1 x1 (idx 3) and d1 x2 (idx 4)
        assert_eq!(Derivative::new(1, vec![1]).rank_index(ctx), 3);
        assert_eq!(Derivative::new(2, vec![1]).rank_index(ctx), 4);
    }

    #[test]
    fn rank_index_roundtrip_and_monotone() {
        for (n, m) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
            let ctx = DiffCtx::new(n, m);
            let mut prev: Option<Derivative> = None;
            for idx in 1..=120u64 {
                let u = Derivative::from_rank_index(idx, ctx).unwrap();
                assert_eq!(u.rank_index(ctx), idx, "roundtrip at {idx} ctx {ctx:?}");
                if let Some(p) = prev {
                    assert!(p.ranked_below(&u));
                }
                prev = Some(u);
            }
        }
    }

    #[test]
    fn derivative_count_per_order() {
        // there are C(N+m-1, m-1) * n derivatives of order N
        let ctx = DiffCtx::new(2, 3);
        let mut counts = std::collections::HashMap::new();
        for idx in 1..=400u64 {
            let u = Derivative::from_rank_index(idx, ctx).unwrap();
            *counts.entry(u.order()).or_insert(0u64) += 1;
        }
        assert_eq!(counts[&0], 2);
        assert_eq!(counts[&1], 6);
        assert_eq!(counts[&2], 12);
        assert_eq!(counts[&3], 20);
    }
}
