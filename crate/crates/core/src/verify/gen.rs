//! Seeded random generators shared by the verification suites.

use crate::diffring::{DiffCtx, DiffPoly};
use crate::ordinal::Ordinal;
use crate::polyring::{Monomial, Poly};
use num::{BigInt, BigRational, BigUint};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random CNF ordinal with coefficients at most `max_coeff`, at most
/// `max_terms` terms, and nesting depth at most `depth`.
pub fn ordinal(rng: &mut ChaCha8Rng, max_coeff: u64, max_terms: usize, depth: usize) -> Ordinal {
    let term_count = rng.gen_range(0..=max_terms);
    if term_count == 0 {
        return Ordinal::zero();
    }
    let mut exps: Vec<Ordinal> = (0..term_count)
        .map(|_| {
            if depth == 0 {
                Ordinal::nat(rng.gen_range(0..=max_coeff))
            } else {
                ordinal(rng, max_coeff, max_terms.min(2), depth - 1)
            }
        })
        .collect();
    exps.sort();
    exps.dedup();
    exps.reverse();
    let terms: Vec<(Ordinal, BigUint)> = exps
        .into_iter()
        .map(|e| (e, BigUint::from(rng.gen_range(1..=max_coeff))))
        .collect();
    Ordinal::from_terms(terms).expect("descending by construction")
}

/// Random polynomial: up to `terms` terms of total degree at most `deg`.
pub fn poly(rng: &mut ChaCha8Rng, n_vars: usize, deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero(n_vars);
    for _ in 0..rng.gen_range(1..=terms) {
        let mut exps = vec![0u32; n_vars];
        let mut budget = deg;
        for e in exps.iter_mut() {
            let take = rng.gen_range(0..=budget);
            *e = take;
            budget -= take;
        }
        let num = rng.gen_range(-3i64..=3);
        if num == 0 {
            continue;
        }
        let den = rng.gen_range(1i64..=2);
        p = p.add(&Poly::from_monomial(
            n_vars,
            Monomial(exps),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        ));
    }
    p
}

/// Random differential polynomial over derivatives of order at most
/// `max_order`, degree at most `deg`.
pub fn diff_poly(
    rng: &mut ChaCha8Rng,
    ctx: DiffCtx,
    max_order: u32,
    deg: u32,
    terms: usize,
) -> DiffPoly {
    let mut p = DiffPoly::zero(ctx);
    for _ in 0..rng.gen_range(1..=terms) {
        let num = rng.gen_range(-3i64..=3);
        if num == 0 {
            continue;
        }
        let mut term = DiffPoly::constant(
            ctx,
            BigRational::new(BigInt::from(num), BigInt::from(rng.gen_range(1i64..=2))),
        );
        let factors = rng.gen_range(0..=deg.min(2));
        let mut degree_left = deg;
        for _ in 0..factors {
            if degree_left == 0 {
                break;
            }
            let indet = rng.gen_range(1..=ctx.n);
            let mut exps = vec![0u32; ctx.m];
            let mut order_left = max_order;
            for e in exps.iter_mut() {
                let take = rng.gen_range(0..=order_left);
                *e = take;
                order_left -= take;
            }
            let u = crate::diffring::Derivative::new(indet, exps);
            let pow = rng.gen_range(1..=degree_left.min(2));
            degree_left -= pow;
            term = term.mul(&DiffPoly::var(ctx, &u).pow(pow));
        }
        p = p.add(&term);
    }
    p
}

/// Random nonconstant differential polynomial.
pub fn nonconstant_diff_poly(
    rng: &mut ChaCha8Rng,
    ctx: DiffCtx,
    max_order: u32,
    deg: u32,
    terms: usize,
) -> DiffPoly {
    loop {
        let p = diff_poly(rng, ctx, max_order, deg, terms);
        if !p.is_constant() {
            return p;
        }
    }
}
