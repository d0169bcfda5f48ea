//! Stratified-ideal membership: bounded-degree linear algebra in the finite
//! polynomial ring spanned by the derivatives that actually occur.

use super::poly::DiffPoly;
use super::DiffError;
use crate::polyring::{membership_bounded, MembershipCert, Poly};
use num::BigUint;
use std::collections::BTreeMap;

/// Which stratum of the stratified ideal to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stratum {
    /// `Lambda_[k]`: derivatives of the generators with derivation order
    /// offset at most `k`; plain ideal membership.
    OrderOffset,
    /// `Lambda^H_(k)`: `H^k g` in the ideal generated by `Lambda`.
    Saturated,
    /// `Lambda^H_[k]`: `H^k g` in the ideal generated by `Lambda_[k]`.
    Mixed,
}

#[derive(Clone, Debug)]
pub struct StratifiedResult {
    pub member: bool,
    /// Certificate in the ambient finite ring when membership holds.
    pub certificate: Option<MembershipCert>,
    /// The ambient variable list (rank indices) backing the certificate.
    pub variables: Vec<u64>,
    pub degree_bound: u64,
}

/// Converts differential polynomials to the finite ring over the given
/// rank-index variable list.
pub fn to_ambient(f: &DiffPoly, vars: &[u64]) -> Result<Poly, DiffError> {
    let index: BTreeMap<u64, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = Poly::zero(vars.len());
    for (mono, coeff) in f.terms() {
        let mut exps = vec![0u32; vars.len()];
        for (&v, &e) in mono {
            let Some(&i) = index.get(&v) else {
                return Err(DiffError::Domain(format!(
                    "derivative index {v} missing from the ambient variable list"
                )));
            };
            exps[i] = e;
        }
        out = out.add(&Poly::from_monomial(
            vars.len(),
            crate::polyring::Monomial(exps),
            coeff.clone(),
        ));
    }
    Ok(out)
}

/// All generators `theta lambda` with derivation order offset at most `k`.
pub fn order_stratum(gens: &[DiffPoly], k: u64) -> Result<Vec<DiffPoly>, DiffError> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let m = first.ctx().m;
    let mut out = Vec::new();
    let mut thetas: Vec<Vec<u32>> = vec![vec![0; m]];
    // enumerate derivation exponent vectors with total order <= k
    let mut frontier = thetas.clone();
    for _ in 0..k {
        let mut next = Vec::new();
        for t in &frontier {
            for i in 0..m {
                let mut t2 = t.clone();
                t2[i] += 1;
                if !next.contains(&t2) && !thetas.contains(&t2) {
                    next.push(t2.clone());
                    thetas.push(t2);
                }
            }
        }
        frontier = next;
    }
    thetas.sort();
    for g in gens {
        for t in &thetas {
            out.push(g.apply_theta(t)?);
        }
    }
    Ok(out)
}

/// Decides stratum membership by bounded-degree linear algebra. The degree
/// bound defaults to the smaller of the requested cap and the
/// faithful-flatness bound for the ambient variable count.
pub fn stratified_membership(
    g: &DiffPoly,
    lambda: &[DiffPoly],
    k: u64,
    which: Stratum,
    degree_cap: u64,
) -> Result<StratifiedResult, DiffError> {
    if lambda.is_empty() {
        return Err(DiffError::Domain("empty generator set".into()));
    }
    let ctx = g.ctx();
    for l in lambda {
        g.check_ctx(l)?;
    }
    let (target, gens): (DiffPoly, Vec<DiffPoly>) = match which {
        Stratum::OrderOffset => (g.clone(), order_stratum(lambda, k)?),
        Stratum::Saturated => {
            let h = super::autoreduce::AutoreducedSet::new(lambda.to_vec())?.h_product()?;
            let mut hk = DiffPoly::one(ctx);
            for _ in 0..k {
                hk = hk.mul(&h);
            }
            (hk.mul(g), lambda.to_vec())
        }
        Stratum::Mixed => {
            let h = super::autoreduce::AutoreducedSet::new(lambda.to_vec())?.h_product()?;
            let mut hk = DiffPoly::one(ctx);
            for _ in 0..k {
                hk = hk.mul(&h);
            }
            (hk.mul(g), order_stratum(lambda, k)?)
        }
    };
    // ambient ring: every derivative occurring anywhere
    let mut vars: Vec<u64> = target.rank_indices();
    for f in &gens {
        vars.extend(f.rank_indices());
    }
    vars.sort_unstable();
    vars.dedup();
    // faithful-flatness scale for the ambient ring, capped to stay runnable
    let b = target
        .total_degree()
        .max(gens.iter().map(|f| f.total_degree()).max().unwrap_or(0));
    let flat_bound = d_n_capped(vars.len() as u64, b, degree_cap);
    let degree_bound = flat_bound.min(degree_cap).max(target.total_degree());
    let ambient_target = to_ambient(&target, &vars)?;
    let ambient_gens: Vec<Poly> = gens
        .iter()
        .map(|f| to_ambient(f, &vars))
        .collect::<Result<_, _>>()?;
    let cert = membership_bounded(&ambient_target, &ambient_gens, degree_bound)
        .map_err(|e| DiffError::Domain(e.to_string()))?;
    Ok(StratifiedResult {
        member: cert.is_some(),
        certificate: cert,
        variables: vars,
        degree_bound,
    })
}

/// `d_n(b) = (2b)^(2^n)` saturated at `cap`.
fn d_n_capped(n: u64, b: u64, cap: u64) -> u64 {
    if b == 0 {
        return 0;
    }
    let base = BigUint::from(2 * b);
    if n >= 16 {
        return cap;
    }
    let exp = 1u64 << n;
    let mut acc = BigUint::from(1u32);
    for _ in 0..exp {
        acc *= &base;
        if acc > BigUint::from(cap) {
            return cap;
        }
    }
    u64::try_from(&acc).unwrap_or(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffring::DiffCtx;

    fn p(n: usize, m: usize, s: &str) -> DiffPoly {
        DiffPoly::parse(DiffCtx::new(n, m), s).unwrap()
    }

    #[test]
    fn generator_is_in_zeroth_stratum() {
        let lam = p(1, 1, "d1 x1 + x1");
        let res = stratified_membership(&lam, &[lam.clone()], 0, Stratum::OrderOffset, 8).unwrap();
        assert!(res.member);
    }

    #[test]
    fn derivative_is_in_first_stratum() {
        let lam = p(1, 1, "d1 x1 + x1");
        let dlam = lam.apply_derivation(1).unwrap();
        let not_yet =
            stratified_membership(&dlam, &[lam.clone()], 0, Stratum::OrderOffset, 8).unwrap();
        assert!(!not_yet.member);
        let res = stratified_membership(&dlam, &[lam], 1, Stratum::OrderOffset, 8).unwrap();
        assert!(res.member);
    }

    #[test]
    fn planted_saturation_member() {
        // lambda = x1 * d1 x1 (H = x1 * x1); g with H g in (lambda)
        let lam = p(1, 1, "x1 * d1 x1");
        let g = p(1, 1, "x1 * d1 x1 * d1 x1");
        // H^1 * g = x1^2 * (d1 x1)^2 * x1 ... member: g * H = lam * (x1^2 d1x1)
        let res = stratified_membership(&g, &[lam], 1, Stratum::Saturated, 10).unwrap();
        assert!(res.member);
        res.certificate.unwrap().verify().unwrap();
    }
}
