//! Differential polynomials: sparse exact-rational polynomials whose
//! variables are ranked derivatives.

use super::{text, Derivative, DiffCtx, DiffError};
use num::{BigRational, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A monomial over derivatives, keyed by rank index, exponents positive.
pub type DMonomial = BTreeMap<u64, u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct DiffPoly {
    ctx: DiffCtx,
    terms: BTreeMap<DMonomial, BigRational>,
}

impl DiffPoly {
    pub fn zero(ctx: DiffCtx) -> Self {
        DiffPoly { ctx, terms: BTreeMap::new() }
    }

    pub fn constant(ctx: DiffCtx, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(DMonomial::new(), c);
        }
        DiffPoly { ctx, terms }
    }

    pub fn one(ctx: DiffCtx) -> Self {
        DiffPoly::constant(ctx, BigRational::one())
    }

    /// The derivative `u` as a polynomial.
    pub fn var(ctx: DiffCtx, u: &Derivative) -> Self {
        let mut mono = DMonomial::new();
        mono.insert(u.rank_index(ctx), 1);
        let mut terms = BTreeMap::new();
        terms.insert(mono, BigRational::one());
        DiffPoly { ctx, terms }
    }

    pub fn ctx(&self) -> DiffCtx {
        self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<DMonomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    pub fn check_ctx(&self, other: &DiffPoly) -> Result<(), DiffError> {
        if self.ctx != other.ctx {
            return Err(DiffError::CtxMismatch(self.ctx.n, self.ctx.m, other.ctx.n, other.ctx.m));
        }
        Ok(())
    }

    fn insert_term(terms: &mut BTreeMap<DMonomial, BigRational>, mono: DMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &DiffPoly) -> DiffPoly {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        DiffPoly { ctx: self.ctx, terms }
    }

    pub fn sub(&self, rhs: &DiffPoly) -> DiffPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &DiffPoly) -> DiffPoly {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                for (&v, &e) in m2 {
                    *m.entry(v).or_insert(0) += e;
                }
                Self::insert_term(&mut terms, m, c1 * c2);
            }
        }
        DiffPoly { ctx: self.ctx, terms }
    }

    pub fn scale(&self, c: &BigRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(self.ctx);
        }
        DiffPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut acc = DiffPoly::one(self.ctx);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|m| m.values().map(|&e| e as u64).sum())
            .max()
            .unwrap_or(0)
    }

    /// Greatest rank index occurring, 0 for constants.
    pub fn max_rank_index(&self) -> u64 {
        self.terms
            .keys()
            .flat_map(|m| m.keys().copied())
            .max()
            .unwrap_or(0)
    }

    /// Least `b` with `self` in `K{X}_{<=b}`: max of rank indices and degree.
    pub fn containment_bound(&self) -> u64 {
        self.max_rank_index().max(self.total_degree())
    }

    /// The greatest derivative appearing (error on constants).
    pub fn leader(&self) -> Result<Derivative, DiffError> {
        let idx = self.max_rank_index();
        if idx == 0 {
            return Err(DiffError::ConstantLeader);
        }
        Ok(Derivative::from_rank_index(idx, self.ctx).expect("positive index"))
    }

    /// Degree of the derivative with rank index `idx` in `self`.
    pub fn degree_in(&self, idx: u64) -> u32 {
        self.terms
            .keys()
            .map(|m| m.get(&idx).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `v^e` where `v` has rank index `idx`: the terms with
    /// exactly that power, with `v` removed.
    pub fn coeff_of_power(&self, idx: u64, e: u32) -> DiffPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.get(&idx).copied().unwrap_or(0) == e {
                let mut m2 = m.clone();
                m2.remove(&idx);
                Self::insert_term(&mut terms, m2, c.clone());
            }
        }
        DiffPoly { ctx: self.ctx, terms }
    }

    /// Initial: coefficient of the highest power of the leader.
    pub fn initial(&self) -> Result<DiffPoly, DiffError> {
        let leader = self.leader()?;
        let idx = leader.rank_index(self.ctx);
        Ok(self.coeff_of_power(idx, self.degree_in(idx)))
    }

    /// Separant: formal partial derivative with respect to the leader.
    pub fn separant(&self) -> Result<DiffPoly, DiffError> {
        let leader = self.leader()?;
        let idx = leader.rank_index(self.ctx);
        Ok(self.partial(idx))
    }

    /// Formal partial derivative with respect to the variable of rank `idx`.
    pub fn partial(&self, idx: u64) -> DiffPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.get(&idx).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            if e == 1 {
                m2.remove(&idx);
            } else {
                m2.insert(idx, e - 1);
            }
            Self::insert_term(&mut terms, m2, c * BigRational::from_integer(e.into()));
        }
        DiffPoly { ctx: self.ctx, terms }
    }

    /// Rank `(leader, degree of leader)`, compared lexicographically.
    pub fn rank(&self) -> Result<(Derivative, u32), DiffError> {
        let leader = self.leader()?;
        let deg = self.degree_in(leader.rank_index(self.ctx));
        Ok((leader, deg))
    }

    pub fn rank_cmp(&self, other: &DiffPoly) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self.rank(), other.rank()) {
            (Err(_), Err(_)) => Ordering::Equal,
            (Err(_), Ok(_)) => Ordering::Less,
            (Ok(_), Err(_)) => Ordering::Greater,
            (Ok((u1, d1)), Ok((u2, d2))) => u1.rank_cmp(&u2).then(d1.cmp(&d2)),
        }
    }

    /// Applies the derivation `delta_i` (1-based) by the product rule.
    pub fn apply_derivation(&self, i: usize) -> Result<DiffPoly, DiffError> {
        if i == 0 || i > self.ctx.m {
            return Err(DiffError::BadDerivation(i, self.ctx.m));
        }
        let mut out = DiffPoly::zero(self.ctx);
        for (m, c) in &self.terms {
            for (&vidx, &e) in m {
                let v = Derivative::from_rank_index(vidx, self.ctx).expect("valid index");
                let dv_idx = v.derive(i).rank_index(self.ctx);
                let mut m2 = m.clone();
                if e == 1 {
                    m2.remove(&vidx);
                } else {
                    m2.insert(vidx, e - 1);
                }
                *m2.entry(dv_idx).or_insert(0) += 1;
                let mut piece = BTreeMap::new();
                Self::insert_term(
                    &mut piece,
                    m2,
                    c * BigRational::from_integer(e.into()),
                );
                out = out.add(&DiffPoly { ctx: self.ctx, terms: piece });
            }
        }
        Ok(out)
    }

    /// Applies `prod_i delta_i^{theta_i}`.
    pub fn apply_theta(&self, theta: &[u32]) -> Result<DiffPoly, DiffError> {
        if theta.len() != self.ctx.m {
            return Err(DiffError::Domain(format!(
                "theta has {} entries, context has {} derivations",
                theta.len(),
                self.ctx.m
            )));
        }
        let mut f = self.clone();
        for (i, &e) in theta.iter().enumerate() {
            for _ in 0..e {
                f = f.apply_derivation(i + 1)?;
            }
        }
        Ok(f)
    }

    /// Partially reduced with respect to `g`: no proper derivative of `g`'s
    /// leader occurs in `self`.
    pub fn partially_reduced_wrt(&self, g: &DiffPoly) -> Result<bool, DiffError> {
        let mu = g.leader()?;
        for m in self.terms.keys() {
            for &vidx in m.keys() {
                let v = Derivative::from_rank_index(vidx, self.ctx).expect("valid");
                if mu.properly_derives(&v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Reduced with respect to `g`: partially reduced and the leader of `g`
    /// appears with degree strictly below its degree in `g`.
    pub fn reduced_wrt(&self, g: &DiffPoly) -> Result<bool, DiffError> {
        if !self.partially_reduced_wrt(g)? {
            return Ok(false);
        }
        let mu_idx = g.leader()?.rank_index(self.ctx);
        Ok(self.degree_in(mu_idx) < g.degree_in(mu_idx))
    }

    /// All distinct rank indices occurring.
    pub fn rank_indices(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .terms
            .keys()
            .flat_map(|m| m.keys().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn parse(ctx: DiffCtx, s: &str) -> Result<DiffPoly, text::ParseDiffPolyError> {
        text::parse_diff_poly(ctx, s)
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_diff_poly(self, f)
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> DiffCtx {
        DiffCtx::new(2, 2)
    }

    fn p(s: &str) -> DiffPoly {
        DiffPoly::parse(ctx(), s).unwrap()
    }

    #[test]
    fn leibniz_on_square() {
        // d1 (x1^2) = 2 x1 d1 x1
        let f = p("x1^2");
        assert_eq!(f.apply_derivation(1).unwrap(), p("2 * x1 * d1 x1"));
    }

    #[test]
    fn derivations_commute() {
        let f = p("(d1 x1)^2 * x2 + 3/2 * x1");
        let d12 = f.apply_derivation(1).unwrap().apply_derivation(2).unwrap();
        let d21 = f.apply_derivation(2).unwrap().apply_derivation(1).unwrap();
        assert_eq!(d12, d21);
    }

    #[test]
    fn derivation_of_constant_is_zero() {
        let c = DiffPoly::constant(ctx(), BigRational::from_integer(5.into()));
        assert!(c.apply_derivation(1).unwrap().is_zero());
    }

    #[test]
    fn paper_example_leader_initial_separant() {
        // ranking makes d1 x1 > d2 x2 automatic in the orderly ranking with
        // x1 as the x of the example and x2 as the y: g1 = d2 x2 (d1 x1)^2 + x1 d1 x1
        let g1 = p("d2 x2 * (d1 x1)^2 + x1 * d1 x1");
        let leader = g1.leader().unwrap();
        assert_eq!(leader, Derivative::new(1, vec![1, 0]));
        assert_eq!(g1.initial().unwrap(), p("d2 x2"));
        assert_eq!(g1.separant().unwrap(), p("2 * d2 x2 * d1 x1 + x1"));
    }

    #[test]
    fn paper_example_derivation() {
        let g1 = p("d2 x2 * (d1 x1)^2 + x1 * d1 x1");
        let expect = p("(2 * d2 x2 * d1 x1 + x1) * d1^2 x1 + (d1 d2 x2 + 1) * (d1 x1)^2");
        assert_eq!(g1.apply_derivation(1).unwrap(), expect);
    }

    #[test]
    fn simple_rank_facts() {
        let f = DiffPoly::parse(DiffCtx::new(1, 1), "x1^3 + x1").unwrap();
        let (u, d) = f.rank().unwrap();
        assert_eq!(u, Derivative::new(1, vec![0]));
        assert_eq!(d, 3);
        assert_eq!(
            f.separant().unwrap(),
            DiffPoly::parse(DiffCtx::new(1, 1), "3*x1^2 + 1").unwrap()
        );
        let x = DiffPoly::parse(DiffCtx::new(1, 1), "x1").unwrap();
        assert!(x.initial().unwrap() == DiffPoly::one(DiffCtx::new(1, 1)));
        assert!(x.separant().unwrap() == DiffPoly::one(DiffCtx::new(1, 1)));
    }
}
