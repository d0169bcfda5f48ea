//! The knitting combinator: composes finitely many interval searchers into
//! one that satisfies all their predicates on a common interval.
//!
//! Each searcher, given a monotone `F` and a floor `d`, returns some
//! `k >= d` such that its predicate holds everywhere on `[k, F(k)]`. The
//! composition peels one searcher off and re-runs the rest against the
//! derived function `G(d') = F(search_0(F^{d'}, d'))` with
//! `F^{d'}(x) = F(max{x, d'})`, then lets the peeled searcher pick the final
//! witness inside the interval the rest secured.

use super::MonotoneFn;
use num::BigUint;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KnitError {
    #[error("searcher {j} violated its contract on [{lo}, {hi}]")]
    ContractViolation { j: usize, lo: BigUint, hi: BigUint },
    #[error("searcher {j} returned {k} below its floor {d}")]
    BelowFloor { j: usize, k: BigUint, d: BigUint },
    #[error("empty searcher list")]
    Empty,
    #[error("interval [{lo}, {hi}] too wide to verify")]
    IntervalTooWide { lo: BigUint, hi: BigUint },
}

type SearchFn = Arc<dyn Fn(&MonotoneFn, &BigUint) -> BigUint + Send + Sync>;
type PredFn = Arc<dyn Fn(&BigUint) -> bool + Send + Sync>;

/// A searcher paired with the predicate its output interval must satisfy.
#[derive(Clone)]
pub struct SearcherSpec {
    pub search: SearchFn,
    pub pred: PredFn,
}

impl SearcherSpec {
    pub fn new(
        search: impl Fn(&MonotoneFn, &BigUint) -> BigUint + Send + Sync + 'static,
        pred: impl Fn(&BigUint) -> bool + Send + Sync + 'static,
    ) -> Self {
        SearcherSpec { search: Arc::new(search), pred: Arc::new(pred) }
    }

    /// The canonical honest searcher: scan upward from the floor for the
    /// first `k` with the predicate true on all of `[k, F(k)]`.
    pub fn scanning(pred: impl Fn(&BigUint) -> bool + Send + Sync + Clone + 'static) -> Self {
        let p = pred.clone();
        SearcherSpec::new(
            move |f: &MonotoneFn, d: &BigUint| {
                let mut k = d.clone();
                loop {
                    let hi = f.eval(&k);
                    let mut x = k.clone();
                    let ok = loop {
                        if !pred(&x) {
                            break false;
                        }
                        if x >= hi {
                            break true;
                        }
                        x += 1u32;
                    };
                    if ok {
                        return k;
                    }
                    k += 1u32;
                }
            },
            p,
        )
    }
}

const VERIFY_WIDTH_CAP: u64 = 1 << 22;

fn verify_interval(
    j: usize,
    pred: &PredFn,
    lo: &BigUint,
    hi: &BigUint,
) -> Result<(), KnitError> {
    let width = if hi >= lo { hi - lo } else { BigUint::ZERO };
    if width > BigUint::from(VERIFY_WIDTH_CAP) {
        return Err(KnitError::IntervalTooWide { lo: lo.clone(), hi: hi.clone() });
    }
    let mut x = lo.clone();
    while x <= *hi {
        if !pred(&x) {
            return Err(KnitError::ContractViolation { j, lo: lo.clone(), hi: hi.clone() });
        }
        x += 1u32;
    }
    Ok(())
}

/// Composes the searchers and returns a `k >= d` with every predicate
/// verified on `[k, F(k)]`.
pub fn knit(
    searchers: &[SearcherSpec],
    f: &MonotoneFn,
    d: &BigUint,
) -> Result<BigUint, KnitError> {
    if searchers.is_empty() {
        return Err(KnitError::Empty);
    }
    let k = knit_inner(searchers, f, d)?;
    if k < *d {
        return Err(KnitError::BelowFloor { j: 0, k, d: d.clone() });
    }
    let hi = f.eval(&k);
    for (j, s) in searchers.iter().enumerate() {
        verify_interval(j, &s.pred, &k, &hi)?;
    }
    Ok(k)
}

fn knit_inner(
    searchers: &[SearcherSpec],
    f: &MonotoneFn,
    d: &BigUint,
) -> Result<BigUint, KnitError> {
    let (first, rest) = searchers.split_first().expect("nonempty");
    if rest.is_empty() {
        let k = (first.search)(f, d);
        if k < *d {
            return Err(KnitError::BelowFloor { j: 0, k, d: d.clone() });
        }
        verify_interval(0, &first.pred, &k, &f.eval(&k))?;
        return Ok(k);
    }
    // G(d') = F(search_0(F^{d'}, d')) with F^{d'}(x) = F(max{x, d'})
    let f_outer = f.clone();
    let first_search = first.search.clone();
    let g = MonotoneFn::new_unchecked("knit-G", move |dp: &BigUint| {
        let dp2 = dp.clone();
        let f_in = f_outer.clone();
        let capped = MonotoneFn::new_unchecked("F^d'", move |x: &BigUint| {
            f_in.eval(x.max(&dp2))
        });
        let k = (first_search)(&capped, dp);
        f_outer.eval(&k)
    });
    let dprime = knit_inner(rest, &g, d)?;
    let dp2 = dprime.clone();
    let f_in = f.clone();
    let capped =
        MonotoneFn::new_unchecked("F^d'", move |x: &BigUint| f_in.eval(x.max(&dp2)));
    let k = (first.search)(&capped, &dprime);
    if k < dprime {
        return Err(KnitError::BelowFloor { j: 0, k, d: dprime });
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn single_searcher_is_itself() {
        let s = SearcherSpec::scanning(|x: &BigUint| *x >= big(10));
        let f = MonotoneFn::affine(1, 1);
        let k = knit(std::slice::from_ref(&s), &f, &big(0)).unwrap();
        assert_eq!(k, big(10));
    }

    #[test]
    fn two_thresholds_with_successor() {
        let s1 = SearcherSpec::scanning(|x: &BigUint| *x >= big(5));
        let s2 = SearcherSpec::scanning(|x: &BigUint| *x >= big(9));
        let f = MonotoneFn::affine(1, 1);
        let k = knit(&[s1, s2], &f, &big(2)).unwrap();
        // oracle: direct scan for the least k with both true on [k, k+1]
        assert!(k >= big(9));
        assert!(k + 1u32 >= big(9));
    }

    #[test]
    fn three_thresholds_with_doubling() {
        let t = [3u64, 7, 12];
        let specs: Vec<SearcherSpec> = t
            .iter()
            .map(|&ti| SearcherSpec::scanning(move |x: &BigUint| *x >= big(ti)))
            .collect();
        let f = MonotoneFn::affine(2, 0);
        let k = knit(&specs, &f, &big(1)).unwrap();
        assert!(k >= big(12));
        // every predicate holds on [k, 2k] by the >= t form
    }

    #[test]
    fn contract_violation_is_reported() {
        // a lying searcher that returns its floor without scanning
        let lying = SearcherSpec::new(
            |_f, d| d.clone(),
            |x: &BigUint| *x >= big(100),
        );
        let f = MonotoneFn::affine(1, 1);
        match knit(&[lying], &f, &big(0)) {
            Err(KnitError::ContractViolation { j: 0, .. }) => {}
            other => panic!("expected contract violation, got {other:?}"),
        }
    }
}
