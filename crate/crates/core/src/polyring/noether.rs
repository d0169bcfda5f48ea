//! Dickson witnesses and the effective Hilbert chain procedure.

use super::membership::{membership_bounded, MembershipCert};
use super::{Monomial, Poly, PolyError};
use crate::budget::{Budget, Eval};
use crate::growth::{frak_m_star, MonotoneFn};
use num::BigUint;

/// An indexable stream of vectors; `get(i)` is 1-based.
pub trait VectorStream {
    fn get(&mut self, i: usize) -> Vec<u64>;
}

impl<F: FnMut(usize) -> Vec<u64>> VectorStream for F {
    fn get(&mut self, i: usize) -> Vec<u64> {
        self(i)
    }
}

#[derive(Clone, Debug)]
pub struct DicksonReport {
    /// 1-based indices with `stream[i] <= stream[j]` componentwise.
    pub pair: (usize, usize),
    /// `m*(D, n)` when it evaluated exactly.
    pub bound: Option<BigUint>,
    pub bound_respected: Option<bool>,
}

/// Scans for the first (j ascending, then i ascending) dominated pair in a
/// norm-controlled vector stream. The norm precondition `|a_i| <= D(i)` is
/// checked on every consumed entry.
pub fn dickson_witness(
    stream: &mut dyn VectorStream,
    d: &MonotoneFn,
    n: usize,
    budget: &Budget,
) -> Result<DicksonReport, PolyError> {
    let mut seen: Vec<Vec<u64>> = Vec::new();
    let mut j = 0usize;
    let pair = 'outer: loop {
        j += 1;
        let v = stream.get(j);
        if v.len() != n {
            return Err(PolyError::Domain(format!(
                "stream entry {j} has dimension {}, expected {n}",
                v.len()
            )));
        }
        let norm = v.iter().copied().max().unwrap_or(0);
        let dj = d.eval(&BigUint::from(j as u64));
        if BigUint::from(norm) > dj {
            return Err(PolyError::NormViolated { index: j, vector: v, bound: u64::try_from(&dj).unwrap_or(u64::MAX) });
        }
        for (i, earlier) in seen.iter().enumerate() {
            if earlier.iter().zip(&v).all(|(a, b)| a <= b) {
                break 'outer (i + 1, j);
            }
        }
        seen.push(v);
    };
    let (bound, bound_respected) = match frak_m_star(d, n as u64, budget) {
        Eval::Exact(b) => {
            let ok = BigUint::from(pair.1 as u64) <= b;
            (Some(b), Some(ok))
        }
        Eval::Residue(_) => (None, None),
    };
    Ok(DicksonReport { pair, bound, bound_respected })
}

#[derive(Clone, Debug)]
pub struct HilbertReport {
    /// Stage `j` with the next stage contained in the ideal of stage `j`.
    pub stabilized_at: usize,
    pub certificates: Vec<MembershipCert>,
    pub bound: Option<BigUint>,
    pub bound_respected: Option<bool>,
}

/// Multivariate reduction by leading monomials: repeatedly cancels the
/// greatest reducible monomial of `f` against a divisor's leading monomial.
fn reduce_by(f: &Poly, reducers: &[Poly]) -> Poly {
    let mut r = f.clone();
    'outer: loop {
        for mono in r.terms().keys().rev() {
            for g in reducers {
                let Some(lm) = g.leading_monomial() else { continue };
                if let Some(q) = mono.div(lm) {
                    let c = r.coeff(mono) / g.leading_coeff().expect("nonzero");
                    let mult = Poly::from_monomial(f.n_vars(), q, c);
                    r = r.sub(&mult.mul(g));
                    continue 'outer;
                }
            }
        }
        return r;
    }
}

/// Runs the effective basis-theorem construction on an ascending chain of
/// generator sets: build reductions `f_1, f_2, ...` stage by stage, stopping
/// at the first stage whose elements all reduce to 0, then certify the
/// containment `(Lambda_{j+1}) <= (Lambda_j)` by bounded membership.
pub fn hilbert_chain_witness(
    stream: &mut dyn FnMut(usize) -> Vec<Poly>,
    d: &MonotoneFn,
    n: usize,
    budget: &Budget,
) -> Result<HilbertReport, PolyError> {
    let mut reducers: Vec<Poly> = Vec::new();
    let mut stage = 0usize;
    loop {
        stage += 1;
        let lam = stream(stage);
        for f in &lam {
            if f.n_vars() != n {
                return Err(PolyError::RingMismatch(f.n_vars(), n));
            }
            let deg = BigUint::from(f.total_degree());
            if deg > d.eval(&BigUint::from(stage as u64)) {
                return Err(PolyError::Domain(format!(
                    "stage {stage} element exceeds the degree control"
                )));
            }
        }
        let mut residues: Vec<Poly> = lam
            .iter()
            .map(|f| reduce_by(f, &reducers))
            .filter(|r| !r.is_zero())
            .collect();
        if residues.is_empty() && stage > 1 {
            let j = stage - 1;
            let prev = stream(j);
            let bound_deg = {
                let b = d.eval(&BigUint::from(stage as u64));
                let b = u64::try_from(&b).unwrap_or(u64::MAX);
                // certificates exist within d_n of the control degree; the
                // solve below works at the planted scale
                b.max(lam.iter().map(|f| f.total_degree()).max().unwrap_or(0))
            };
            let mut certificates = Vec::new();
            for f in &lam {
                let mut found = None;
                let mut dd = 0u64;
                while dd <= bound_deg {
                    if let Some(c) = membership_bounded(f, &prev, dd)? {
                        found = Some(c);
                        break;
                    }
                    dd += 1;
                }
                match found {
                    Some(c) => certificates.push(c),
                    None => {
                        return Err(PolyError::Domain(format!(
                            "stage {stage} is not contained in stage {j}: {f}"
                        )))
                    }
                }
            }
            let (bound, bound_respected) = match frak_m_star(d, n as u64, budget) {
                Eval::Exact(b) => {
                    let ok = BigUint::from(j as u64) <= b;
                    (Some(b), Some(ok))
                }
                Eval::Residue(_) => (None, None),
            };
            return Ok(HilbertReport { stabilized_at: j, certificates, bound, bound_respected });
        }
        if !residues.is_empty() {
            // keep the reduction with the greatest leading monomial
            residues.sort_by(|a, b| {
                a.leading_monomial()
                    .cloned()
                    .unwrap_or_else(|| Monomial::constant(n))
                    .cmp(&b.leading_monomial().cloned().unwrap_or_else(|| Monomial::constant(n)))
            });
            reducers.push(residues.pop().expect("nonempty"));
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
    fn zero_vector_gives_first_pair() {
        let data = [vec![0u64, 0], vec![3, 3]];
        let mut stream = |i: usize| data[(i - 1).min(1)].clone();
        let d = MonotoneFn::affine(1, 2);
        let rep = dickson_witness(&mut stream, &d, 2, &Budget::default()).unwrap();
        assert_eq!(rep.pair, (1, 2));
    }

    #[test]
    fn seven_vector_fixture() {
        let data = [
            vec![2u64, 0],
            vec![1, 1],
            vec![0, 2],
            vec![0, 1],
            vec![1, 0],
            vec![0, 0],
            vec![5, 5],
        ];
        let mut stream = |i: usize| data[i - 1].clone();
        let d = MonotoneFn::affine(1, 2);
        let rep = dickson_witness(&mut stream, &d, 2, &Budget::default()).unwrap();
        assert_eq!(rep.pair, (1, 7));
        assert_eq!(rep.bound_respected, Some(true));
    }

    #[test]
    fn three_vector_fixture() {
        let data = [vec![1u64, 0], vec![0, 1], vec![1, 1]];
        let mut stream = |i: usize| data[i - 1].clone();
        let d = MonotoneFn::affine(1, 2);
        let rep = dickson_witness(&mut stream, &d, 2, &Budget::default()).unwrap();
        assert_eq!(rep.pair, (1, 3));
    }

    #[test]
    fn norm_violation_names_the_index() {
        let mut stream = |_i: usize| vec![100u64];
        let d = MonotoneFn::affine(1, 2);
        match dickson_witness(&mut stream, &d, 1, &Budget::default()) {
            Err(PolyError::NormViolated { index: 1, .. }) => {}
            other => panic!("expected norm violation, got {other:?}"),
        }
    }

    #[test]
    fn constant_chain_stabilizes_at_one() {
        let mut stream = |_i: usize| vec![p(2, "x1")];
        let d = MonotoneFn::affine(1, 2);
        let rep = hilbert_chain_witness(&mut stream, &d, 2, &Budget::default()).unwrap();
        assert_eq!(rep.stabilized_at, 1);
        for c in &rep.certificates {
            c.verify().unwrap();
        }
    }

    #[test]
    fn two_stage_chain() {
        let mut stream = |i: usize| {
            if i == 1 {
                vec![p(1, "x1^2")]
            } else {
                vec![p(1, "x1^2"), p(1, "x1")]
            }
        };
        let d = MonotoneFn::affine(1, 2);
        let rep = hilbert_chain_witness(&mut stream, &d, 1, &Budget::default()).unwrap();
        assert_eq!(rep.stabilized_at, 2);
        assert_eq!(rep.bound_respected, Some(true));
    }

    #[test]
    fn staircase_chain_runs_long() {
        // each stage adds a fresh leading monomial x1^(L-i) x2^i
        let stages: Vec<Vec<Poly>> = (0..=5usize)
            .map(|i| {
                (0..=i)
                    .map(|k| {
                        Poly::from_monomial(
                            2,
                            Monomial(vec![(5 - k) as u32, k as u32]),
                            num::BigRational::from_integer(1.into()),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut stream = |i: usize| stages[(i - 1).min(5)].clone();
        let d = MonotoneFn::affine(1, 5);
        let rep = hilbert_chain_witness(&mut stream, &d, 2, &Budget::default()).unwrap();
        assert_eq!(rep.stabilized_at, 6);
        assert_eq!(rep.bound_respected, Some(true));
    }
}
