//! Chain-stabilization witness scans for autoreduced-set chains and radical
//! differential ideal chains.

use crate::budget::{Budget, Eval};
use crate::diffring::{
    autoreduce, pseudodivide, stratified_membership, AutoreducedSet, DiffError, DiffPoly, Stratum,
};
use crate::growth::catalogue::{expr as catalogue_expr, BoundExpr, FnRef};
use crate::growth::{frak_h, MonotoneFn};
use crate::ordinal::Ordinal;
use num::BigUint;
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub enum ChainEvidence {
    /// Rank sequences of the two stalling stages.
    RankComparison {
        at: Vec<(crate::diffring::Derivative, u64)>,
        next: Vec<(crate::diffring::Derivative, u64)>,
    },
    /// Per-element oracle answers for the stabilized stage.
    OracleTranscript(Vec<(String, bool)>),
}

#[derive(Clone, Debug)]
pub struct ChainWitness {
    pub index: usize,
    pub evidence: ChainEvidence,
    /// The governing bound: exact value when it evaluated, otherwise the
    /// symbolic expression.
    pub bound: BoundCheck,
}

#[derive(Clone, Debug)]
pub enum BoundCheck {
    Exact { value: BigUint, respected: bool },
    Symbolic { expr: String },
}

/// Scans an autoreduced-set chain for the first index whose rank fails to
/// drop. The containment `Lambda_i` in `K{X}_{<= D(i)}` is checked on every
/// consumed stage.
pub fn autoreduced_chain_witness(
    stream: &mut dyn FnMut(usize) -> AutoreducedSet,
    d: &MonotoneFn,
    n: usize,
    m: usize,
    budget: &Budget,
) -> Result<ChainWitness, DiffError> {
    let mut i = 1usize;
    let mut prev = fetch_checked(stream, i, d)?;
    loop {
        let next = fetch_checked(stream, i + 1, d)?;
        let cmp = crate::diffring::rank_seq_cmp(&next.rank_seq(), &prev.rank_seq());
        if cmp != Ordering::Less {
            let bound = match frak_h(n, m, d, &[], budget)
                .map_err(|e| DiffError::Domain(e.to_string()))?
            {
                Eval::Exact(value) => {
                    let respected = BigUint::from(i as u64) < value;
                    BoundCheck::Exact { value, respected }
                }
                Eval::Residue(_) => BoundCheck::Symbolic {
                    expr: format!("(h {} {} (fn {}))", n, m, d.desc()),
                },
            };
            return Ok(ChainWitness {
                index: i,
                evidence: ChainEvidence::RankComparison {
                    at: prev.rank_seq(),
                    next: next.rank_seq(),
                },
                bound,
            });
        }
        prev = next;
        i += 1;
    }
}

fn fetch_checked(
    stream: &mut dyn FnMut(usize) -> AutoreducedSet,
    i: usize,
    d: &MonotoneFn,
) -> Result<AutoreducedSet, DiffError> {
    let set = stream(i);
    let bound = set.containment_bound();
    let di = d.eval(&BigUint::from(i as u64));
    if BigUint::from(bound) > di {
        return Err(DiffError::Domain(format!(
            "stage {i} leaves K{{X}}_{{<= D({i})}}: bound {bound} vs D = {di}"
        )));
    }
    Ok(set)
}

/// How the perfect-ideal membership oracle decides `h in {Lambda u Lambda_i}`.
pub enum RittOracle<'a> {
    /// Sufficient check: `h` pseudodivides to 0 against an autoreduced set
    /// for the union with multiplier 1 (then `h` lies in the differential
    /// ideal itself). Multiplier != 1 answers unknown.
    Pseudodivision,
    /// Bounded search: `h^k` inside the order-stratum for `k` up to the cap.
    PowerSearch { order_offset: u64, power_cap: u64, solve_degree: u64 },
    /// Explicit table, consulted with the stage index.
    Table(&'a mut dyn FnMut(usize, &DiffPoly) -> Option<bool>),
}

/// Scans `i` upward from `i0` until every element of `Lambda_{F(i)}` is
/// certified inside the perfect ideal generated by `Lambda` and `Lambda_i`.
/// The closed-form stabilization bound is attached symbolically; its
/// evaluation is almost never feasible.
#[allow(clippy::too_many_arguments)]
pub fn ritt_chain_witness(
    lambda: &AutoreducedSet,
    stream: &mut dyn FnMut(usize) -> Vec<DiffPoly>,
    d: &MonotoneFn,
    f: &MonotoneFn,
    i0: usize,
    oracle: &mut RittOracle<'_>,
    scan_cap: usize,
    budget: &Budget,
) -> Result<ChainWitness, DiffError> {
    let (n, m) = match lambda.elements().first() {
        Some(p) => (p.ctx().n, p.ctx().m),
        None => (1, 1),
    };
    let mut prev_stage: Option<Vec<DiffPoly>> = None;
    for i in i0.. {
        if i > i0 + scan_cap {
            return Err(DiffError::StepsExhausted(scan_cap as u64));
        }
        let stage = stream(i);
        for g in &stage {
            let bound = g.containment_bound();
            let di = d.eval(&BigUint::from(i as u64));
            if BigUint::from(bound) > di {
                return Err(DiffError::Domain(format!(
                    "stage {i} element leaves K{{X}}_{{<= D({i})}}"
                )));
            }
        }
        if let Some(prev) = &prev_stage {
            for g in prev {
                if !stage.contains(g) {
                    return Err(DiffError::Domain(format!(
                        "stream not ascending at stage {i}"
                    )));
                }
            }
        }
        let fi = f.eval(&BigUint::from(i as u64));
        let fi = usize::try_from(&fi)
            .map_err(|_| DiffError::Domain("F(i) out of range".into()))?;
        let target_stage = stream(fi);
        let mut transcript = Vec::new();
        let mut all_in = true;
        for h in &target_stage {
            let verdict = decide_membership(lambda, i, &stage, h, oracle)?;
            match verdict {
                Some(true) => transcript.push((h.to_string(), true)),
                Some(false) => {
                    transcript.push((h.to_string(), false));
                    all_in = false;
                    break;
                }
                None => {
                    return Err(DiffError::OracleUnknown(h.to_string()));
                }
            }
        }
        if all_in {
            let j_expr = catalogue_expr(
                "j",
                vec![
                    BigUint::from(n as u64),
                    BigUint::from(m as u64),
                    BigUint::from(i0 as u64),
                    BigUint::from(lambda.containment_bound()),
                ],
                vec![FnRef::Named(f.desc().to_string())],
            )
            .map_err(|e| DiffError::Domain(e.to_string()))?;
            let _ = budget;
            return Ok(ChainWitness {
                index: i,
                evidence: ChainEvidence::OracleTranscript(transcript),
                bound: BoundCheck::Symbolic { expr: j_expr.to_sexpr() },
            });
        }
        prev_stage = Some(stage);
    }
    unreachable!()
}

fn decide_membership(
    lambda: &AutoreducedSet,
    stage_index: usize,
    stage: &[DiffPoly],
    h: &DiffPoly,
    oracle: &mut RittOracle<'_>,
) -> Result<Option<bool>, DiffError> {
    match oracle {
        RittOracle::Table(t) => Ok(t(stage_index, h)),
        RittOracle::Pseudodivision => {
            let mut union: Vec<DiffPoly> = lambda.elements().to_vec();
            union.extend(stage.iter().cloned());
            let run = autoreduce(&union)?;
            let cert = pseudodivide(h, &run.result)?;
            let trivial_multiplier = cert.remainder.is_zero()
                && cert.multiplier()? == DiffPoly::one(h.ctx());
            if trivial_multiplier {
                Ok(Some(true))
            } else {
                // reduction needed initial/separant multipliers: this check
                // alone cannot certify membership in the perfect ideal
                Ok(None)
            }
        }
        RittOracle::PowerSearch { order_offset, power_cap, solve_degree } => {
            let mut union: Vec<DiffPoly> = lambda.elements().to_vec();
            union.extend(stage.iter().cloned());
            let union: Vec<DiffPoly> = union.into_iter().filter(|p| !p.is_zero()).collect();
            if union.is_empty() {
                return Ok(Some(h.is_zero()));
            }
            for k in 1..=*power_cap {
                let hk = h.pow(k as u32);
                let res = stratified_membership(
                    &hk,
                    &union,
                    *order_offset,
                    Stratum::OrderOffset,
                    *solve_degree,
                )?;
                if res.member {
                    return Ok(Some(true));
                }
            }
            Ok(None)
        }
    }
}

/// The closed-form iteration index attached to stabilization witnesses.
pub fn ritt_bound_expr(n: u64, m: u64) -> (Ordinal, BoundExpr) {
    let ord = crate::growth::catalogue::j_ordinal(n, m);
    let e = BoundExpr::Iter {
        f: FnRef::Named("F".into()),
        index: ord.clone(),
        arg: Box::new(BoundExpr::var("max{d,n,i0}")),
    };
    (ord, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::DiffCtx;

    fn p(n: usize, m: usize, s: &str) -> DiffPoly {
        DiffPoly::parse(DiffCtx::new(n, m), s).unwrap()
    }

    fn set(polys: &[DiffPoly]) -> AutoreducedSet {
        AutoreducedSet::new(polys.to_vec()).unwrap()
    }

    #[test]
    fn constant_stream_stalls_at_one() {
        let s = set(&[p(1, 1, "x1^2")]);
        let mut stream = |_i: usize| s.clone();
        let d = MonotoneFn::affine(1, 2);
        let w =
            autoreduced_chain_witness(&mut stream, &d, 1, 1, &Budget::default()).unwrap();
        assert_eq!(w.index, 1);
        if let BoundCheck::Exact { respected, .. } = w.bound {
            assert!(respected);
        }
    }

    #[test]
    fn descending_degree_chain() {
        let stages = [
            set(&[p(1, 1, "x1^3")]),
            set(&[p(1, 1, "x1^2")]),
            set(&[p(1, 1, "x1")]),
            set(&[p(1, 1, "x1")]),
        ];
        let mut stream = |i: usize| stages[(i - 1).min(3)].clone();
        let d = MonotoneFn::affine(1, 3);
        let w =
            autoreduced_chain_witness(&mut stream, &d, 1, 1, &Budget::default()).unwrap();
        assert_eq!(w.index, 3);
    }

    #[test]
    fn ritt_scan_constant_stream() {
        // Lambda = {x1}; stream adds derivatives of x1, which reduce to 0
        // with multiplier 1, so the pseudodivision oracle certifies stage i0
        let lam = set(&[p(1, 1, "x1")]);
        let mut stream = |i: usize| {
            (0..=i).map(|k| {
                let mut f = p(1, 1, "x1");
                for _ in 0..k {
                    f = f.apply_derivation(1).unwrap();
                }
                f
            }).collect::<Vec<_>>()
        };
        let d = MonotoneFn::affine(1, 3);
        let f = MonotoneFn::affine(1, 1);
        let mut oracle = RittOracle::Pseudodivision;
        let w = ritt_chain_witness(
            &lam,
            &mut stream,
            &d,
            &f,
            1,
            &mut oracle,
            16,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(w.index, 1);
        match &w.bound {
            BoundCheck::Symbolic { expr } => assert!(expr.starts_with("(j ")),
            other => panic!("expected symbolic bound, got {other:?}"),
        }
    }

    #[test]
    fn table_oracle_forces_the_index() {
        // success only at i0 + 2: the marker joins the ideal at stage 3
        let lam = set(&[p(1, 1, "x1")]);
        let marker = p(1, 1, "d1 x1 + 1");
        let mstone = marker.clone();
        let mut stream = move |_i: usize| vec![p(1, 1, "x1"), mstone.clone()];
        let d = MonotoneFn::affine(2, 3);
        let f = MonotoneFn::affine(1, 0); // F(i) = i
        let x1 = p(1, 1, "x1");
        let mut table =
            move |i: usize, h: &DiffPoly| Some(*h == x1 || (*h == marker && i >= 3));
        let mut oracle = RittOracle::Table(&mut table);
        let w = ritt_chain_witness(
            &lam,
            &mut stream,
            &d,
            &f,
            1,
            &mut oracle,
            16,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(w.index, 3);
    }
}
