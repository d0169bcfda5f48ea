//! Sampled dominance checks between bound expressions.
//!
//! No symbolic inequality proving: both sides are evaluated exactly at each
//! sample. When the right side exceeds the budget but carries a certified
//! lower bound at least the left value, the comparison still holds; anything
//! less is reported inconclusive.

use super::catalogue::{eval, BoundExpr, CatalogueError, EvalEnv};
use crate::budget::{Budget, Eval};
use num::BigUint;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleOutcome {
    Holds { lhs: BigUint, rhs: BigUint },
    HoldsViaLowerBound { lhs: BigUint, rhs_lower: BigUint },
    Fails { lhs: BigUint, rhs: BigUint },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct DominanceReport {
    pub outcomes: Vec<(BTreeMap<String, BigUint>, SampleOutcome)>,
}

impl DominanceReport {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| {
            matches!(o, SampleOutcome::Holds { .. } | SampleOutcome::HoldsViaLowerBound { .. })
        })
    }

    pub fn any_fails(&self) -> bool {
        self.outcomes.iter().any(|(_, o)| matches!(o, SampleOutcome::Fails { .. }))
    }
}

/// Checks `lhs <= rhs` at each sample assignment.
pub fn dominates(
    lhs: &BoundExpr,
    rhs: &BoundExpr,
    samples: &[BTreeMap<String, BigUint>],
    env: &EvalEnv,
    budget: &Budget,
) -> Result<DominanceReport, CatalogueError> {
    let mut outcomes = Vec::with_capacity(samples.len());
    for sample in samples {
        let mut env = env.clone();
        for (k, v) in sample {
            env.vars.insert(k.clone(), v.clone());
        }
        let l = eval(lhs, &env, budget)?;
        let r = eval(rhs, &env, budget)?;
        let outcome = match (l, r) {
            (Eval::Exact(lv), Eval::Exact(rv)) => {
                if lv <= rv {
                    SampleOutcome::Holds { lhs: lv, rhs: rv }
                } else {
                    SampleOutcome::Fails { lhs: lv, rhs: rv }
                }
            }
            (Eval::Exact(lv), Eval::Residue(r)) => {
                if lv <= r.lower_bound {
                    SampleOutcome::HoldsViaLowerBound { lhs: lv, rhs_lower: r.lower_bound }
                } else {
                    SampleOutcome::Inconclusive {
                        reason: format!(
                            "rhs unevaluated at {} with lower bound below lhs",
                            r.frontier
                        ),
                    }
                }
            }
            (Eval::Residue(r), _) => SampleOutcome::Inconclusive {
                reason: format!("lhs unevaluated at {}", r.frontier),
            },
        };
        outcomes.push((sample.clone(), outcome));
    }
    Ok(DominanceReport { outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::catalogue::{expr, FnRef};
    use crate::ordinal::Ordinal;

    fn sample(pairs: &[(&str, u64)]) -> BTreeMap<String, BigUint> {
        pairs.iter().map(|&(k, v)| (k.to_string(), BigUint::from(v))).collect()
    }

    #[test]
    fn p1_below_benchmark() {
        // p_1(d) = d vs G^{w^2*8}(d) at d = 3: holds, possibly via the
        // residue lower bound
        let lhs = expr("p_n", vec![1u32.into(), 3u32.into()], vec![]).unwrap();
        let rhs = BoundExpr::Iter {
            f: FnRef::Successor,
            index: "w^2*8".parse::<Ordinal>().unwrap(),
            arg: Box::new(BoundExpr::nat(3u32)),
        };
        let rep = dominates(&lhs, &rhs, &[sample(&[])], &EvalEnv::default(), &Budget::new(4096, 1 << 20))
            .unwrap();
        assert!(rep.all_hold(), "{:?}", rep.outcomes);
    }

    #[test]
    fn g_bb_below_benchmark_exactly() {
        // g(2,2) = 18 vs G^{w^2*2+1}(2), both exact
        let lhs = expr("g", vec![2u32.into(), 2u32.into()], vec![]).unwrap();
        let rhs = BoundExpr::Iter {
            f: FnRef::Successor,
            index: "w^2*2+1".parse::<Ordinal>().unwrap(),
            arg: Box::new(BoundExpr::nat(2u32)),
        };
        let rep =
            dominates(&lhs, &rhs, &[sample(&[])], &EvalEnv::default(), &Budget::default()).unwrap();
        match &rep.outcomes[0].1 {
            SampleOutcome::Holds { lhs, .. } => assert_eq!(*lhs, BigUint::from(18u32)),
            other => panic!("expected exact hold, got {other:?}"),
        }
    }

    #[test]
    fn stated_equality_discrepancy_flagged() {
        // G^w(b) vs 2b at b = 3: lhs = 7 > 6, the check reports the failure
        let lhs = BoundExpr::Iter {
            f: FnRef::Successor,
            index: Ordinal::omega(),
            arg: Box::new(BoundExpr::var("b")),
        };
        let rhs = BoundExpr::Mul(Box::new(BoundExpr::nat(2u32)), Box::new(BoundExpr::var("b")));
        let rep = dominates(&lhs, &rhs, &[sample(&[("b", 3)])], &EvalEnv::default(), &Budget::default())
            .unwrap();
        match &rep.outcomes[0].1 {
            SampleOutcome::Fails { lhs, rhs } => {
                assert_eq!(*lhs, BigUint::from(7u32));
                assert_eq!(*rhs, BigUint::from(6u32));
            }
            other => panic!("expected failure report, got {other:?}"),
        }
    }
}
