//! Evaluation budgets and budgeted results.
//!
//! The bound catalogue is non-primitive-recursive by design, so exact
//! evaluation must be allowed to give up. A [`Budget`] caps the bit size of
//! every intermediate value and the number of recursion steps; exceeding
//! either produces a [`Residue`] carrying the largest exact value reached,
//! never an approximation.

use num::BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum bit length of any intermediate natural number.
    pub bits: u64,
    /// Maximum number of elementary recursion steps.
    pub steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { bits: 1 << 20, steps: 1 << 22 }
    }
}

impl Budget {
    pub fn new(bits: u64, steps: u64) -> Self {
        Budget { bits, steps }
    }

    pub fn admits(&self, value: &BigUint) -> bool {
        value.bits() <= self.bits
    }
}

/// Why an evaluation stopped short of an exact value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueReason {
    BitsExceeded,
    StepsExceeded,
}

/// An unevaluated remainder: the computation was abandoned at `frontier`,
/// so the true value is at least `lower_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    pub lower_bound: BigUint,
    pub reason: ResidueReason,
    /// Printable description of the node left unevaluated.
    pub frontier: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eval {
    Exact(BigUint),
    Residue(Residue),
}

impl Eval {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Eval::Exact(v) => Some(v),
            Eval::Residue(_) => None,
        }
    }

    pub fn residue(lower_bound: BigUint, reason: ResidueReason, frontier: impl Into<String>) -> Eval {
        Eval::Residue(Residue { lower_bound, reason, frontier: frontier.into() })
    }

    /// The exact value when present, otherwise the certified lower bound.
    pub fn lower_bound(&self) -> &BigUint {
        match self {
            Eval::Exact(v) => v,
            Eval::Residue(r) => &r.lower_bound,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Eval::Exact(_))
    }
}

/// Step counter charged against a [`Budget`].
#[derive(Clone, Debug)]
pub struct StepMeter {
    used: BigUint,
    cap: BigUint,
}

impl StepMeter {
    pub fn new(budget: &Budget) -> Self {
        StepMeter { used: BigUint::ZERO, cap: BigUint::from(budget.steps) }
    }

    /// Charge `n` steps; false once the cap is crossed.
    pub fn charge(&mut self, n: &BigUint) -> bool {
        self.used += n;
        self.used <= self.cap
    }

    pub fn charge_one(&mut self) -> bool {
        self.used += 1u32;
        self.used <= self.cap
    }
}
