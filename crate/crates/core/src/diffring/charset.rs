//! The characteristic-set loop: repair coherence, saturation, the H-product,
//! bounded primality (against a finite witness pool), and reduced elements,
//! each round strictly lowering the rank, until the set is the
//! characteristic set of a prime ideal avoiding the oracle's H-product.

use super::autoreduce::{descend_with, minimal_rank_subset, rank_seq_cmp, AutoreducedSet};
use super::poly::DiffPoly;
use super::reduce::{delta_s_poly, pseudodivide};
use super::{Derivative, DiffError};
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    True,
    False,
    Unknown,
}

/// A differential-ideal membership oracle consulted on concrete polynomials.
pub trait OracleEntry {
    fn contains(&mut self, f: &DiffPoly) -> OracleAnswer;
}

/// Explicit (polynomial, answer) table; unlisted queries answer `Unknown`.
pub struct TableOracle {
    entries: Vec<(DiffPoly, bool)>,
    /// When set, unlisted queries answer `False` instead of `Unknown`.
    pub default_false: bool,
}

impl TableOracle {
    pub fn new(entries: Vec<(DiffPoly, bool)>) -> Self {
        TableOracle { entries, default_false: false }
    }

    pub fn with_default_false(entries: Vec<(DiffPoly, bool)>) -> Self {
        TableOracle { entries, default_false: true }
    }
}

impl OracleEntry for TableOracle {
    fn contains(&mut self, f: &DiffPoly) -> OracleAnswer {
        for (g, yes) in &self.entries {
            if g == f {
                return if *yes { OracleAnswer::True } else { OracleAnswer::False };
            }
        }
        if self.default_false {
            OracleAnswer::False
        } else {
            OracleAnswer::Unknown
        }
    }
}

#[derive(Clone, Debug)]
pub struct CharSetConfig {
    /// Candidate factor pairs for the bounded-primality case; empty means
    /// "derive from the generators' monomial supports".
    pub witness_pool: Vec<(DiffPoly, DiffPoly)>,
    /// Degree cap for the bounded membership solves inside case checks.
    pub solve_degree: u64,
    /// Iteration cap (the true bound is the chain-length bound, which is
    /// usually not worth evaluating).
    pub max_rounds: u64,
}

impl Default for CharSetConfig {
    fn default() -> Self {
        CharSetConfig { witness_pool: Vec::new(), solve_degree: 8, max_rounds: 64 }
    }
}

#[derive(Clone, Debug)]
pub struct CharSetRun {
    pub result: AutoreducedSet,
    /// Which repair case fired at each round.
    pub trace: Vec<String>,
    /// Every oracle query with its answer, in order.
    pub transcript: Vec<(String, OracleAnswer)>,
}

#[derive(Debug)]
pub struct CharSetAbort {
    pub reason: DiffError,
    pub transcript: Vec<(String, OracleAnswer)>,
    /// The set at the time of the abort.
    pub partial: Option<AutoreducedSet>,
}

struct OracleDriver<'a> {
    oracle: &'a mut dyn OracleEntry,
    transcript: Vec<(String, OracleAnswer)>,
}

impl<'a> OracleDriver<'a> {
    fn ask(&mut self, f: &DiffPoly) -> OracleAnswer {
        let a = self.oracle.contains(f);
        self.transcript.push((f.to_string(), a));
        a
    }
}

/// Monomial-support products used as the default bounded-primality pool.
fn default_pool(set: &AutoreducedSet) -> Vec<(DiffPoly, DiffPoly)> {
    let Some(first) = set.elements().first() else {
        return Vec::new();
    };
    let ctx = first.ctx();
    let mut monos: Vec<DiffPoly> = Vec::new();
    for f in set.elements() {
        for (mono, _) in f.terms() {
            if mono.is_empty() {
                continue;
            }
            let mut p = DiffPoly::one(ctx);
            for (&v, &e) in mono {
                let u = Derivative::from_rank_index(v, ctx).expect("positive");
                p = p.mul(&DiffPoly::var(ctx, &u).pow(e));
            }
            if !monos.contains(&p) {
                monos.push(p);
            }
        }
    }
    let mut pool = Vec::new();
    for a in &monos {
        for b in &monos {
            pool.push((a.clone(), b.clone()));
        }
    }
    pool
}

/// Runs the five-case characteristic-set loop against a membership oracle
/// for a proper differential ideal containing the input.
pub fn char_set(
    input: &[DiffPoly],
    oracle: &mut dyn OracleEntry,
    config: &CharSetConfig,
) -> Result<CharSetRun, CharSetAbort> {
    let mut driver = OracleDriver { oracle, transcript: Vec::new() };
    match run_loop(input, &mut driver, config) {
        Ok((result, trace)) => {
            Ok(CharSetRun { result, trace, transcript: driver.transcript })
        }
        Err((reason, partial)) => {
            Err(CharSetAbort { reason, transcript: driver.transcript, partial })
        }
    }
}

type LoopOutcome = Result<(AutoreducedSet, Vec<String>), (DiffError, Option<AutoreducedSet>)>;

fn run_loop(input: &[DiffPoly], driver: &mut OracleDriver<'_>, config: &CharSetConfig) -> LoopOutcome {
    let mut current = minimal_rank_subset(input).map_err(|e| (e, None))?;
    let mut trace = Vec::new();
    let mut pool_cache: BTreeMap<usize, Vec<(DiffPoly, DiffPoly)>> = BTreeMap::new();
    for round in 0.. {
        if round >= config.max_rounds {
            return Err((
                DiffError::StepsExhausted(config.max_rounds),
                Some(current),
            ));
        }
        let mut next: Option<(String, DiffPoly)> = None;

        // case 1: coherence repair
        if next.is_none() {
            match coherence_offender(&current) {
                Ok(Some(r)) => next = Some(("coherence".into(), r)),
                Ok(None) => {}
                Err(e) => return Err((e, Some(current))),
            }
        }
        // case 2: saturation repair (inputs must reduce to zero)
        if next.is_none() {
            for f in input {
                if f.is_zero() {
                    continue;
                }
                let cert = pseudodivide(f, &current).map_err(|e| (e, Some(current.clone())))?;
                if !cert.remainder.is_zero() {
                    if cert.remainder.is_constant() {
                        return Err((DiffError::UnitIdeal, Some(current)));
                    }
                    next = Some(("saturation".into(), cert.remainder));
                    break;
                }
            }
        }
        // case 3: the H-product sits inside the oracle ideal
        if next.is_none() {
            let h = current.h_product().map_err(|e| (e, Some(current.clone())))?;
            if driver.ask(&h) == OracleAnswer::True {
                let mut found = None;
                for f in current.elements() {
                    let init = f.initial().map_err(|e| (e, Some(current.clone())))?;
                    if !init.is_constant() && driver.ask(&init) == OracleAnswer::True {
                        found = Some(init);
                        break;
                    }
                    let sep = f.separant().map_err(|e| (e, Some(current.clone())))?;
                    if !sep.is_constant() && driver.ask(&sep) == OracleAnswer::True {
                        found = Some(sep);
                        break;
                    }
                }
                match found {
                    Some(u) => next = Some(("h-product".into(), u)),
                    None => {
                        return Err((
                            DiffError::OracleInconsistent(
                                "H is claimed a member but no initial or separant is".into(),
                            ),
                            Some(current),
                        ))
                    }
                }
            }
        }
        // case 4: bounded-primality repair over the finite witness pool
        if next.is_none() {
            let pool = if config.witness_pool.is_empty() {
                pool_cache
                    .entry(current.elements().len())
                    .or_insert_with(|| default_pool(&current))
                    .clone()
            } else {
                config.witness_pool.clone()
            };
            match primality_offender(&current, &pool, driver, config) {
                Ok(Some(r)) => next = Some(("primality".into(), r)),
                Ok(None) => {}
                Err(e) => return Err((e, Some(current))),
            }
        }
        // case 5: a reduced nonzero member of the saturation
        if next.is_none() {
            let pool = if config.witness_pool.is_empty() {
                pool_cache
                    .entry(current.elements().len())
                    .or_insert_with(|| default_pool(&current))
                    .clone()
            } else {
                config.witness_pool.clone()
            };
            match reduced_member_offender(&current, &pool, config) {
                Ok(Some(r)) => next = Some(("reduced-member".into(), r)),
                Ok(None) => {}
                Err(e) => return Err((e, Some(current))),
            }
        }

        match next {
            None => {
                trace.push("stable".into());
                return Ok((current, trace));
            }
            Some((case, adjoin)) => {
                trace.push(case);
                let pool: Vec<DiffPoly> = current.elements().to_vec();
                let next_set = descend_with(&current, &pool, &adjoin)
                    .map_err(|e| (e, Some(current.clone())))?;
                if rank_seq_cmp(&next_set.rank_seq(), &current.rank_seq()) != Ordering::Less {
                    return Err((
                        DiffError::Domain("repair round failed to lower the rank".into()),
                        Some(current),
                    ));
                }
                current = next_set;
            }
        }
    }
    unreachable!()
}

fn coherence_offender(set: &AutoreducedSet) -> Result<Option<DiffPoly>, DiffError> {
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
            let cert = pseudodivide(&delta, set)?;
            if !cert.remainder.is_zero() {
                if cert.remainder.is_constant() {
                    return Err(DiffError::UnitIdeal);
                }
                return Ok(Some(cert.remainder));
            }
        }
    }
    Ok(None)
}

/// Scans the pool for a product inside the oracle ideal with both factors
/// outside the current saturation; adjoins the reduced member the oracle
/// pins down.
fn primality_offender(
    set: &AutoreducedSet,
    pool: &[(DiffPoly, DiffPoly)],
    driver: &mut OracleDriver<'_>,
    config: &CharSetConfig,
) -> Result<Option<DiffPoly>, DiffError> {
    for (f, g) in pool {
        let prod = f.mul(g);
        if driver.ask(&prod) != OracleAnswer::True {
            continue;
        }
        // both factors already reducing to zero means no witness here
        let fr = pseudodivide(f, set)?;
        let gr = pseudodivide(g, set)?;
        if fr.remainder.is_zero() || gr.remainder.is_zero() {
            continue;
        }
        // the oracle must commit to one factor
        let (fa, ga) = (driver.ask(f), driver.ask(g));
        let pick = match (fa, ga) {
            (OracleAnswer::True, _) => f,
            (_, OracleAnswer::True) => g,
            (OracleAnswer::Unknown, _) | (_, OracleAnswer::Unknown) => {
                return Err(DiffError::OracleUnknown(format!("{f} or {g}")))
            }
            (OracleAnswer::False, OracleAnswer::False) => {
                return Err(DiffError::OracleInconsistent(format!(
                    "product {prod} is a member but neither {f} nor {g} is"
                )));
            }
        };
        let cert = pseudodivide(pick, set)?;
        if cert.remainder.is_zero() {
            // our degree-relative checks disagree with the pool heuristic;
            // not a genuine witness
            continue;
        }
        if cert.remainder.is_constant() {
            return Err(DiffError::UnitIdeal);
        }
        let _ = config;
        return Ok(Some(cert.remainder));
    }
    Ok(None)
}

/// Looks for a nonzero pool element reduced with respect to the set that
/// lies in its saturation (via a capped power search).
fn reduced_member_offender(
    set: &AutoreducedSet,
    pool: &[(DiffPoly, DiffPoly)],
    config: &CharSetConfig,
) -> Result<Option<DiffPoly>, DiffError> {
    let mut seen: Vec<DiffPoly> = Vec::new();
    for (f, g) in pool {
        for cand in [f, g] {
            if cand.is_zero() || cand.is_constant() || seen.contains(cand) {
                continue;
            }
            seen.push(cand.clone());
            let mut reduced = true;
            for lam in set.elements() {
                if !cand.reduced_wrt(lam)? {
                    reduced = false;
                    break;
                }
            }
            if !reduced {
                continue;
            }
            // capped saturation test: H^j * cand inside the algebraic ideal
            let h = set.h_product()?;
            let mut hk = DiffPoly::one(cand.ctx());
            for _ in 0..3u32 {
                hk = hk.mul(&h);
                let target = hk.mul(cand);
                let res = super::stratified::stratified_membership(
                    &target,
                    set.elements(),
                    0,
                    super::stratified::Stratum::OrderOffset,
                    config.solve_degree,
                )?;
                if res.member {
                    return Ok(Some(cand.clone()));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::DiffCtx;

    fn p(n: usize, m: usize, s: &str) -> DiffPoly {
        DiffPoly::parse(DiffCtx::new(n, m), s).unwrap()
    }

    #[test]
    fn trivial_fixture_returns_input() {
        // Lambda = {x1} is already the characteristic set of its saturation
        let lam = p(1, 1, "x1");
        let mut oracle = TableOracle::new(vec![
            (p(1, 1, "x1"), true),
            (DiffPoly::one(DiffCtx::new(1, 1)), false),
            (p(1, 1, "x1*x1"), true),
        ]);
        let run = char_set(&[lam.clone()], &mut oracle, &CharSetConfig::default()).unwrap();
        assert_eq!(run.result.elements(), &[lam]);
    }

    #[test]
    fn product_fixture_collapses_to_factor() {
        // Lambda = {x1 * x2} with the oracle for the [x1]-based prime ideal
        let ctx = DiffCtx::new(2, 1);
        let lam = p(2, 1, "x1*x2");
        let mut oracle = TableOracle::with_default_false(vec![
            (p(2, 1, "x1"), true),
            (p(2, 1, "x1^2"), true),
            (p(2, 1, "x1*x2"), true),
            (p(2, 1, "x1^2*x2"), true),
            (p(2, 1, "x1*x2^2"), true),
            (p(2, 1, "x1^2*x2^2"), true),
            (DiffPoly::one(ctx), false),
            (p(2, 1, "x2"), false),
        ]);
        let run = char_set(&[lam], &mut oracle, &CharSetConfig::default()).unwrap();
        assert_eq!(run.result.elements(), &[p(2, 1, "x1")]);
        assert!(run.trace.iter().any(|c| c == "h-product" || c == "primality"));
    }

    #[test]
    fn inconsistent_oracle_aborts_with_transcript() {
        // H = x1^2 is claimed inside but x1 outside: no factor can be picked
        let lam = p(2, 1, "x1*x2");
        let mut oracle = TableOracle::with_default_false(vec![
            (p(2, 1, "x1^2"), true),
            (p(2, 1, "x1"), false),
        ]);
        let err = char_set(&[lam], &mut oracle, &CharSetConfig::default()).unwrap_err();
        assert!(matches!(err.reason, DiffError::OracleInconsistent(_)));
        assert!(!err.transcript.is_empty());
    }
}
