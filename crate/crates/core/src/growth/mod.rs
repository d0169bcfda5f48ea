//! Ordinal-indexed function iteration, the successor benchmark, the multiset
//! recursion, and the catalogue of explicit bound functions.

pub mod catalogue;
mod dominate;
mod frak_h;
mod knit;
mod multiset;

pub use catalogue::{BoundExpr, CatalogueError, FnRef};
pub use dominate::{dominates, DominanceReport, SampleOutcome};
pub use frak_h::frak_h;
pub use knit::{knit, KnitError, SearcherSpec};
pub use multiset::{frak_m, frak_m_star, multi_compare, Multiset};

use crate::budget::{Budget, Eval, ResidueReason, StepMeter};
use crate::ordinal::Ordinal;
use num::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrowthError {
    #[error("function {0:?} failed the monotonicity spot check at {1} < {2}")]
    NotMonotone(String, BigUint, BigUint),
    #[error("{0}")]
    Domain(String),
}

/// Closed-form kernel of a monotone function, when one is known; lets
/// ordinal iteration consume integer tails in one jump.
#[derive(Clone, Debug, PartialEq, Eq)]
enum FnKernel {
    Opaque,
    /// `x -> mul*x + add`.
    Affine { mul: BigUint, add: BigUint },
}

/// Result of applying a function `c` times through its closed form.
pub enum BatchResult {
    Value(BigUint),
    TooBig,
    NoClosedForm,
}

/// A total monotone function on the naturals with a printable descriptor.
///
/// Monotonicity is a caller contract, spot-checked on 32 deterministic
/// sample pairs at construction.
#[derive(Clone)]
pub struct MonotoneFn {
    desc: String,
    kernel: FnKernel,
    f: Arc<dyn Fn(&BigUint) -> BigUint + Send + Sync>,
}

impl std::fmt::Debug for MonotoneFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MonotoneFn({})", self.desc)
    }
}

impl MonotoneFn {
    pub fn new(
        desc: impl Into<String>,
        f: impl Fn(&BigUint) -> BigUint + Send + Sync + 'static,
    ) -> Result<Self, GrowthError> {
        let mf = MonotoneFn { desc: desc.into(), kernel: FnKernel::Opaque, f: Arc::new(f) };
        mf.spot_check()?;
        Ok(mf)
    }

    /// Skips the spot check; for internal constructions whose monotonicity
    /// is established elsewhere.
    pub fn new_unchecked(
        desc: impl Into<String>,
        f: impl Fn(&BigUint) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        MonotoneFn { desc: desc.into(), kernel: FnKernel::Opaque, f: Arc::new(f) }
    }

    fn with_affine_kernel(desc: String, mul: u64, add: u64) -> Self {
        let (m, a) = (BigUint::from(mul), BigUint::from(add));
        let (m2, a2) = (m.clone(), a.clone());
        MonotoneFn {
            desc,
            kernel: FnKernel::Affine { mul: m, add: a },
            f: Arc::new(move |x| x * &m2 + &a2),
        }
    }

    /// `self` applied `c` times, via the closed form when one is known and
    /// the result stays within the bit budget.
    pub fn apply_repeated(&self, c: &BigUint, x: &BigUint, budget: &Budget) -> BatchResult {
        let FnKernel::Affine { mul, add } = &self.kernel else {
            return BatchResult::NoClosedForm;
        };
        use num::{One, Zero};
        if mul.is_one() {
            // x + add*c
            let v = x + add * c;
            return if budget.admits(&v) { BatchResult::Value(v) } else { BatchResult::TooBig };
        }
        if mul.is_zero() {
            return BatchResult::Value(if c.is_zero() { x.clone() } else { add.clone() });
        }
        // mul^c * x + add * (mul^c - 1) / (mul - 1)
        let Ok(csmall) = u64::try_from(c) else {
            return BatchResult::TooBig;
        };
        if mul.bits().saturating_mul(csmall) > budget.bits + 64 {
            return BatchResult::TooBig;
        }
        let mc = num::pow::pow(mul.clone(), csmall as usize);
        let geo = (&mc - 1u32) / (mul - 1u32);
        let v = &mc * x + add * geo;
        if budget.admits(&v) {
            BatchResult::Value(v)
        } else {
            BatchResult::TooBig
        }
    }

    fn spot_check(&self) -> Result<(), GrowthError> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6e6f);
        for _ in 0..32 {
            let a: u64 = rng.gen_range(0..1 << 12);
            let b: u64 = rng.gen_range(0..1 << 12);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (lo, hi) = (BigUint::from(lo), BigUint::from(hi));
            if self.eval(&lo) > self.eval(&hi) {
                return Err(GrowthError::NotMonotone(self.desc.clone(), lo, hi));
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &BigUint) -> BigUint {
        (self.f)(x)
    }

    pub fn desc(&self) -> &str {
        &self.desc
    }

    /// The successor function, the fast-growing benchmark.
    pub fn successor() -> Self {
        MonotoneFn::with_affine_kernel("G".into(), 1, 1)
    }

    /// `i -> a*i + b`.
    pub fn affine(a: u64, b: u64) -> Self {
        let desc = match (a, b) {
            (0, b) => format!("{b}"),
            (1, 0) => "i".to_string(),
            (1, b) => format!("i+{b}"),
            (a, 0) => format!("{a}*i"),
            (a, b) => format!("{a}*i+{b}"),
        };
        MonotoneFn::with_affine_kernel(desc, a, b)
    }

    /// `i -> f(offset + i)`, the shifted function `f_{offset}`.
    pub fn shift(&self, offset: BigUint) -> Self {
        let f = self.f.clone();
        let desc = format!("{}<<{}", self.desc, offset);
        let kernel = match &self.kernel {
            // a(x + o) + b = ax + (ao + b)
            FnKernel::Affine { mul, add } => {
                FnKernel::Affine { mul: mul.clone(), add: mul * &offset + add }
            }
            FnKernel::Opaque => FnKernel::Opaque,
        };
        MonotoneFn { desc, kernel, f: Arc::new(move |x| f(&(x + &offset))) }
    }

    /// `i -> f(i) + 1`.
    pub fn plus_one(&self) -> Self {
        let f = self.f.clone();
        let kernel = match &self.kernel {
            FnKernel::Affine { mul, add } => {
                FnKernel::Affine { mul: mul.clone(), add: add + 1u32 }
            }
            FnKernel::Opaque => FnKernel::Opaque,
        };
        MonotoneFn {
            desc: format!("{}+1", self.desc),
            kernel,
            f: Arc::new(move |x| f(x) + 1u32),
        }
    }

    /// `i -> f(g(i))`.
    pub fn compose(&self, inner: &MonotoneFn) -> Self {
        let f = self.f.clone();
        let g = inner.f.clone();
        MonotoneFn::new_unchecked(format!("{}∘{}", self.desc, inner.desc), move |x| f(&g(x)))
    }
}

/// Exact ordinal-indexed iteration `g^alpha(b) = g^{alpha[b]}(g(b))` under a
/// budget. A residue carries the largest exact intermediate reached.
///
/// Integer tails are consumed in one jump through the function's closed-form
/// kernel when it has one (`g^{gamma+c}(b) = g^gamma(g^c(b))`); the budget
/// then meters limit steps rather than unit applications.
pub fn iterate(g: &MonotoneFn, alpha: &Ordinal, b: &BigUint, budget: &Budget) -> Eval {
    let mut a = alpha.clone();
    let mut b = b.clone();
    let mut meter = StepMeter::new(budget);
    while !a.is_zero() {
        if !meter.charge_one() {
            return Eval::residue(
                b,
                ResidueReason::StepsExceeded,
                format!("({})^({})", g.desc(), a),
            );
        }
        // batch a whole integer tail when the closed form is available
        if let Some((exp, c)) = a.terms().last().cloned() {
            if exp.is_zero() {
                match g.apply_repeated(&c, &b, budget) {
                    BatchResult::Value(v) => {
                        let mut terms = a.terms().to_vec();
                        terms.pop();
                        a = Ordinal::from_terms(terms).expect("still normal");
                        b = v;
                        continue;
                    }
                    BatchResult::TooBig => {
                        return Eval::residue(
                            b,
                            ResidueReason::BitsExceeded,
                            format!("({})^({})", g.desc(), a),
                        );
                    }
                    BatchResult::NoClosedForm => {}
                }
            }
        }
        let next = g.eval(&b);
        if !budget.admits(&next) {
            return Eval::residue(
                b,
                ResidueReason::BitsExceeded,
                format!("({})^({})", g.desc(), a),
            );
        }
        a = a.fundamental(&b).expect("nonzero index");
        // deeply nested indices can balloon structurally while the value
        // crawls; treat that as running out of steps
        if a.node_count() > INDEX_NODE_CAP {
            return Eval::residue(b, ResidueReason::StepsExceeded, "(index too large)");
        }
        b = next;
    }
    Eval::Exact(b)
}

/// Cap on the structural size of the unfolding iteration index.
const INDEX_NODE_CAP: usize = 512;

/// Deterministic sample streams for the randomized suites.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn iterate_base_cases() {
        let g = MonotoneFn::successor();
        let b = Budget::default();
        assert_eq!(iterate(&g, &Ordinal::zero(), &big(7), &b), Eval::Exact(big(7)));
        // G^w(3) = G^3(4) = 7
        assert_eq!(iterate(&g, &Ordinal::omega(), &big(3), &b), Eval::Exact(big(7)));
    }

    #[test]
    fn iterate_omega_unrolls_to_loop() {
        // independent oracle: G^w(b) applies G 1+b times
        let g = MonotoneFn::successor();
        let b = Budget::default();
        for x in 0u64..20 {
            let direct = big(x) + big(x) + 1u32;
            assert_eq!(iterate(&g, &Ordinal::omega(), &big(x), &b), Eval::Exact(direct));
        }
    }

    #[test]
    fn iterate_omega_squared_at_four() {
        let g = MonotoneFn::successor();
        let budget = Budget::default();
        let v = iterate(&g, &"w^2".parse().unwrap(), &big(4), &budget);
        // G^{w^2}(4) = G^{w*4}(5); with f(x) = 2x+1 that is f^4(5) = 95
        assert_eq!(v, Eval::Exact(big(95)));
        assert!(*v.lower_bound() >= big(16 * 4));
    }

    #[test]
    fn residue_on_tight_budget() {
        let g = MonotoneFn::successor();
        let tight = Budget::new(4, 1 << 20);
        match iterate(&g, &"w^2".parse().unwrap(), &big(10), &tight) {
            Eval::Residue(r) => {
                assert_eq!(r.reason, ResidueReason::BitsExceeded);
                assert!(r.lower_bound >= big(10));
            }
            Eval::Exact(v) => panic!("expected residue, got {v}"),
        }
    }

    #[test]
    fn monotone_spot_check_rejects_decreasing() {
        let bad = MonotoneFn::new("dec", |x| {
            if *x == BigUint::ZERO { BigUint::from(100u32) } else { BigUint::from(100u32) - (x % 100u32) }
        });
        assert!(bad.is_err());
    }
}
