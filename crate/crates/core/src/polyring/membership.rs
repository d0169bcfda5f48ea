//! Bounded-degree ideal membership and syzygy generators by exact linear
//! algebra over the monomial basis.
//!
//! `membership_bounded(h, gens, D)` looks for cofactors of degree at most
//! `D` with `sum f_i g_i = h`; `NotFound` (a `None`) means no representation
//! exists *within that degree*, never that `h` is outside the ideal.

use super::linalg::LinearSystem;
use super::{monomials_up_to, Monomial, Poly, PolyError};
use num::{BigRational, Zero};
use std::collections::BTreeMap;

/// Verified certificate `sum cofactor_i * gen_i = target` with all cofactor
/// degrees at most `degree_bound`.
#[derive(Clone, Debug)]
pub struct MembershipCert {
    pub target: Poly,
    pub generators: Vec<Poly>,
    pub cofactors: Vec<Poly>,
    pub degree_bound: u64,
}

impl MembershipCert {
    pub fn new(
        target: Poly,
        generators: Vec<Poly>,
        cofactors: Vec<Poly>,
        degree_bound: u64,
    ) -> Result<Self, PolyError> {
        let cert = MembershipCert { target, generators, cofactors, degree_bound };
        cert.verify()?;
        Ok(cert)
    }

    /// Re-expands the combination and checks it equals the target exactly.
    pub fn verify(&self) -> Result<(), PolyError> {
        if self.generators.len() != self.cofactors.len() {
            return Err(PolyError::Domain("cofactor count mismatch".into()));
        }
        let mut acc = Poly::zero(self.target.n_vars());
        for (g, c) in self.generators.iter().zip(&self.cofactors) {
            if c.total_degree() > self.degree_bound {
                return Err(PolyError::Domain(format!(
                    "cofactor degree {} exceeds bound {}",
                    c.total_degree(),
                    self.degree_bound
                )));
            }
            acc = acc.add(&g.mul(c));
        }
        if acc != self.target {
            return Err(PolyError::Domain("certificate does not re-expand to target".into()));
        }
        Ok(())
    }

    /// Multiplies every cofactor by `f`, certifying `f * target`.
    pub fn scale_by(&self, f: &Poly) -> Result<MembershipCert, PolyError> {
        MembershipCert::new(
            self.target.mul(f),
            self.generators.clone(),
            self.cofactors.iter().map(|c| c.mul(f)).collect(),
            self.degree_bound + f.total_degree(),
        )
    }
}

/// Collects the column layout shared by membership and syzygy solving.
struct CofactorSpace {
    n_vars: usize,
    monos: Vec<Monomial>,
    gens: usize,
}

impl CofactorSpace {
    fn new(n_vars: usize, gens: usize, degree: u64) -> Self {
        CofactorSpace { n_vars, monos: monomials_up_to(n_vars, degree), gens }
    }

    fn cols(&self) -> usize {
        self.monos.len() * self.gens
    }

    fn cofactors_from(&self, solution: &[BigRational]) -> Vec<Poly> {
        let mut out = Vec::with_capacity(self.gens);
        for gi in 0..self.gens {
            let mut p = Poly::zero(self.n_vars);
            for (mi, mono) in self.monos.iter().enumerate() {
                let c = &solution[gi * self.monos.len() + mi];
                if !c.is_zero() {
                    p = p.add(&Poly::from_monomial(self.n_vars, mono.clone(), c.clone()));
                }
            }
            out.push(p);
        }
        out
    }
}

fn build_rows(
    space: &CofactorSpace,
    gens: &[Poly],
    rhs: Option<&Poly>,
) -> (Vec<Monomial>, BTreeMap<Monomial, usize>) {
    let mut row_monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for g in gens {
        for m in g.terms().keys() {
            for cm in &space.monos {
                let prod = m.mul(cm);
                let next = row_monos.len();
                row_monos.entry(prod).or_insert(next);
            }
        }
    }
    if let Some(h) = rhs {
        for m in h.terms().keys() {
            let next = row_monos.len();
            row_monos.entry(m.clone()).or_insert(next);
        }
    }
    let mut ordered: Vec<(Monomial, usize)> = row_monos.iter().map(|(m, &i)| (m.clone(), i)).collect();
    ordered.sort_by(|a, b| a.0.cmp(&b.0));
    let monos: Vec<Monomial> = ordered.iter().map(|(m, _)| m.clone()).collect();
    let index: BTreeMap<Monomial, usize> =
        monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    (monos, index)
}

fn fill_system(
    space: &CofactorSpace,
    gens: &[Poly],
    rhs: Option<&Poly>,
) -> (LinearSystem, Vec<Monomial>) {
    let (row_monos, row_index) = build_rows(space, gens, rhs);
    let mut rows: Vec<Vec<BigRational>> =
        vec![vec![BigRational::zero(); space.cols()]; row_monos.len()];
    for (gi, g) in gens.iter().enumerate() {
        for (gm, gc) in g.terms() {
            for (mi, cm) in space.monos.iter().enumerate() {
                let prod = gm.mul(cm);
                let r = row_index[&prod];
                let col = gi * space.monos.len() + mi;
                rows[r][col] += gc;
            }
        }
    }
    let mut sys = LinearSystem::new(space.cols());
    for (r, row) in rows.into_iter().enumerate() {
        let rhs_val = rhs
            .map(|h| h.coeff(&row_monos[r]))
            .unwrap_or_else(BigRational::zero);
        sys.add_row(row, rhs_val);
    }
    (sys, row_monos)
}

/// Searches for cofactors of degree at most `degree` expressing `h` over
/// `gens`. Completeness holds degree-relatively: when a representation with
/// cofactor degrees `<= degree` exists, one is returned.
pub fn membership_bounded(
    h: &Poly,
    gens: &[Poly],
    degree: u64,
) -> Result<Option<MembershipCert>, PolyError> {
    for g in gens {
        h.check_ring(g)?;
    }
    if gens.is_empty() {
        return if h.is_zero() {
            Ok(Some(MembershipCert::new(h.clone(), vec![], vec![], degree)?))
        } else {
            Ok(None)
        };
    }
    let space = CofactorSpace::new(h.n_vars(), gens.len(), degree);
    let (sys, _) = fill_system(&space, gens, Some(h));
    match sys.particular_solution() {
        None => Ok(None),
        Some(sol) => {
            let cofactors = space.cofactors_from(&sol);
            Ok(Some(MembershipCert::new(h.clone(), gens.to_vec(), cofactors, degree)?))
        }
    }
}

/// Generators (as cofactor vectors) of all solutions to `sum f_i y_i = 0`
/// with entries of degree at most `degree`: an exact kernel basis of the
/// monomial-indexed linear system. Every returned vector satisfies the
/// relation exactly.
pub fn syzygy_generators(gens: &[Poly], degree: u64) -> Result<Vec<Vec<Poly>>, PolyError> {
    if gens.is_empty() {
        return Err(PolyError::Domain("syzygies need at least one generator".into()));
    }
    for g in gens {
        gens[0].check_ring(g)?;
    }
    let n_vars = gens[0].n_vars();
    let space = CofactorSpace::new(n_vars, gens.len(), degree);
    let (sys, _) = fill_system(&space, gens, None);
    let basis = sys.kernel_basis();
    let mut out = Vec::new();
    for vec in basis {
        let cof = space.cofactors_from(&vec);
        let mut acc = Poly::zero(n_vars);
        for (g, c) in gens.iter().zip(&cof) {
            acc = acc.add(&g.mul(c));
        }
        assert!(acc.is_zero(), "kernel vector fails the relation");
        out.push(cof);
    }
    Ok(out)
}

/// Kernel generators of a *system* of homogeneous equations sharing one
/// variable vector: `equations[r][v]` is the coefficient of variable `v` in
/// equation `r`. Entries of the returned vectors have degree at most
/// `degree` and satisfy every equation exactly.
pub fn syzygy_generators_system(
    equations: &[Vec<Poly>],
    degree: u64,
) -> Result<Vec<Vec<Poly>>, PolyError> {
    let Some(first) = equations.first() else {
        return Err(PolyError::Domain("empty equation system".into()));
    };
    let n_vars = first
        .iter()
        .map(Poly::n_vars)
        .next()
        .ok_or_else(|| PolyError::Domain("equations need at least one variable".into()))?;
    let total = first.len();
    for eq in equations {
        if eq.len() != total {
            return Err(PolyError::Domain("ragged equation system".into()));
        }
    }
    let space = CofactorSpace::new(n_vars, total, degree);
    let mut row_monos: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for (r, eq) in equations.iter().enumerate() {
        for coeff in eq {
            for m in coeff.terms().keys() {
                for cm in &space.monos {
                    let key = (r, m.mul(cm));
                    let next = row_monos.len();
                    row_monos.entry(key).or_insert(next);
                }
            }
        }
    }
    let mut rows: Vec<Vec<BigRational>> =
        vec![vec![BigRational::zero(); space.cols()]; row_monos.len()];
    for (r, eq) in equations.iter().enumerate() {
        for (v, coeff) in eq.iter().enumerate() {
            for (cm_i, cm) in space.monos.iter().enumerate() {
                for (m, c) in coeff.terms() {
                    let row = row_monos[&(r, m.mul(cm))];
                    rows[row][v * space.monos.len() + cm_i] += c;
                }
            }
        }
    }
    let mut sys = LinearSystem::new(space.cols());
    for row in rows {
        sys.add_row(row, BigRational::zero());
    }
    let basis = sys.kernel_basis();
    let mut out = Vec::new();
    for vecv in basis {
        let cof = space.cofactors_from(&vecv);
        for eq in equations {
            let mut acc = Poly::zero(n_vars);
            for (coeff, c) in eq.iter().zip(&cof) {
                acc = acc.add(&coeff.mul(c));
            }
            assert!(acc.is_zero(), "system kernel vector fails an equation");
        }
        out.push(cof);
    }
    Ok(out)
}

/// Membership of a vector in the module generated by `basis` over the
/// polynomial ring, with multiplier degrees at most `degree`. Used to verify
/// that syzygy outputs generate.
pub fn module_membership(
    target: &[Poly],
    basis: &[Vec<Poly>],
    degree: u64,
) -> Result<Option<Vec<Poly>>, PolyError> {
    if basis.is_empty() {
        return Ok(if target.iter().all(Poly::is_zero) { Some(vec![]) } else { None });
    }
    let n_vars = target[0].n_vars();
    let comps = target.len();
    let space = CofactorSpace::new(n_vars, basis.len(), degree);
    // unknowns: one polynomial multiplier per basis vector; equations: each
    // component of the vector identity, spread over monomials.
    let mut row_monos: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    for (bi, bvec) in basis.iter().enumerate() {
        let _ = bi;
        for (comp, bp) in bvec.iter().enumerate() {
            for m in bp.terms().keys() {
                for cm in &space.monos {
                    let key = (comp, m.mul(cm));
                    let next = row_monos.len();
                    row_monos.entry(key).or_insert(next);
                }
            }
        }
    }
    for (comp, t) in target.iter().enumerate() {
        for m in t.terms().keys() {
            let key = (comp, m.clone());
            let next = row_monos.len();
            row_monos.entry(key).or_insert(next);
        }
    }
    let mut rows: Vec<Vec<BigRational>> =
        vec![vec![BigRational::zero(); space.cols()]; row_monos.len()];
    let mut rhs: Vec<BigRational> = vec![BigRational::zero(); row_monos.len()];
    for (bi, bvec) in basis.iter().enumerate() {
        for (comp, bp) in bvec.iter().enumerate() {
            for (bm, bc) in bp.terms() {
                for (mi, cm) in space.monos.iter().enumerate() {
                    let r = row_monos[&(comp, bm.mul(cm))];
                    rows[r][bi * space.monos.len() + mi] += bc;
                }
            }
        }
    }
    for (comp, t) in target.iter().enumerate() {
        for (m, c) in t.terms() {
            rhs[row_monos[&(comp, m.clone())]] = c.clone();
        }
    }
    let mut sys = LinearSystem::new(space.cols());
    for (row, r) in rows.into_iter().zip(rhs) {
        sys.add_row(row, r);
    }
    match sys.particular_solution() {
        None => Ok(None),
        Some(sol) => {
            let mult = space.cofactors_from(&sol);
            // verify
            for comp in 0..comps {
                let mut acc = Poly::zero(n_vars);
                for (bv, mu) in basis.iter().zip(&mult) {
                    acc = acc.add(&bv[comp].mul(mu));
                }
                if &acc != &target[comp] {
                    return Err(PolyError::Domain("module membership failed to verify".into()));
                }
            }
            Ok(Some(mult))
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
    fn identity_cofactor() {
        let g = p(2, "x1^2 + x2");
        let cert = membership_bounded(&g, &[g.clone()], 0).unwrap().unwrap();
        assert_eq!(cert.cofactors, vec![p(2, "1")]);
    }

    #[test]
    fn constants_are_not_in_xy() {
        let gens = [p(2, "x1"), p(2, "x2")];
        assert!(membership_bounded(&p(2, "1"), &gens, 4).unwrap().is_none());
    }

    #[test]
    fn planted_representation_recovered() {
        let g1 = p(2, "x1^2 + x2");
        let g2 = p(2, "x1*x2 - 1");
        let h = p(2, "x1").mul(&g1).add(&p(2, "x2").mul(&g2));
        let cert = membership_bounded(&h, &[g1, g2], 1).unwrap().unwrap();
        cert.verify().unwrap();
    }

    #[test]
    fn koszul_syzygy_found() {
        let gens = [p(2, "x1"), p(2, "x2")];
        let syz = syzygy_generators(&gens, 1).unwrap();
        // (x2, -x1) must be in the module generated
        let target = vec![p(2, "x2"), p(2, "-x1")];
        assert!(module_membership(&target, &syz, 2).unwrap().is_some());
    }

    #[test]
    fn single_generator_has_no_syzygies() {
        let syz = syzygy_generators(&[p(2, "x1^2 + 1")], 2).unwrap();
        assert!(syz.is_empty());
    }
}
