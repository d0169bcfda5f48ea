//! Radical membership constructions: the binary splitting tree, power-bound
//! certificates, and the bounded primality predicate.

use super::membership::{
    membership_bounded, module_membership, syzygy_generators_system, MembershipCert,
};
use super::{Poly, PolyError};

/// Factor oracle: for a non-prime node ideal, a pair `(g, h)` with
/// `g*h` in the ideal but neither factor in it (at the checked bound), or
/// `None` for "unknown".
pub type FactorOracle<'a> = &'a mut dyn FnMut(&[Poly]) -> Option<(Poly, Poly)>;

/// Representation `f = sum d_i * r_i` with every `r_i^(2^depth)` certified
/// in the original ideal.
#[derive(Clone, Debug)]
pub struct RadicalCert {
    pub f: Poly,
    pub depth: u32,
    /// `(multiplier d_i, component r_i, certificate for r_i^(2^depth))`.
    pub parts: Vec<(Poly, Poly, MembershipCert)>,
}

impl RadicalCert {
    pub fn verify(&self) -> Result<(), PolyError> {
        let mut acc = Poly::zero(self.f.n_vars());
        for (d, r, cert) in &self.parts {
            acc = acc.add(&d.mul(r));
            let power = r.pow(1u64 << self.depth);
            if cert.target != power {
                return Err(PolyError::Domain("power certificate targets the wrong poly".into()));
            }
            cert.verify()?;
        }
        if acc != self.f {
            return Err(PolyError::Domain("radical combination does not re-expand".into()));
        }
        Ok(())
    }
}

/// Builds the binary splitting tree for `f` over the ideal of `gens`
/// (requires `f^k` in the ideal, checked first), combining leaf
/// representations through syzygy generators into `f = sum d_i r_i` with
/// each `r_i^(2^depth)` certified.
pub fn radical_tree(
    gens: &[Poly],
    f: &Poly,
    k: u64,
    oracle: FactorOracle<'_>,
    solve_degree: u64,
) -> Result<RadicalCert, PolyError> {
    if gens.is_empty() {
        return Err(PolyError::Domain("radical tree needs generators".into()));
    }
    // precondition: f^k is a member
    let fk = f.pow(k);
    if membership_bounded(&fk, gens, solve_degree)?.is_none() {
        return Err(PolyError::Domain(format!(
            "precondition failed: f^{k} has no certificate within degree {solve_degree}"
        )));
    }
    // grow the tree
    struct Node {
        gens: Vec<Poly>,
        depth: u32,
    }
    let mut leaves: Vec<(Vec<Poly>, MembershipCert)> = Vec::new();
    let mut work = vec![Node { gens: gens.to_vec(), depth: 0 }];
    let mut max_depth = 0u32;
    while let Some(node) = work.pop() {
        if let Some(cert) = membership_bounded(f, &node.gens, solve_degree)? {
            max_depth = max_depth.max(node.depth);
            leaves.push((node.gens, cert));
            continue;
        }
        let Some((g, h)) = oracle(&node.gens) else {
            return Err(PolyError::OracleUnknown);
        };
        // verified split: gh inside, factors outside (degree-relatively)
        let gh = g.mul(&h);
        if membership_bounded(&gh, &node.gens, solve_degree)?.is_none() {
            return Err(PolyError::Domain("oracle product is not a member".into()));
        }
        if membership_bounded(&g, &node.gens, solve_degree)?.is_some()
            || membership_bounded(&h, &node.gens, solve_degree)?.is_some()
        {
            return Err(PolyError::Domain("oracle factor already a member".into()));
        }
        let mut left = node.gens.clone();
        left.push(g);
        let mut right = node.gens.clone();
        right.push(h);
        work.push(Node { gens: left, depth: node.depth + 1 });
        work.push(Node { gens: right, depth: node.depth + 1 });
    }
    let depth = max_depth;
    let base_leaf = 0usize;
    let (base_gens, base_cert) = &leaves[base_leaf];
    if leaves.len() == 1 {
        // trivial tree: f itself is the single component
        let power_cert = power_certificate(f, gens, depth, solve_degree)?;
        let cert = RadicalCert {
            f: f.clone(),
            depth,
            parts: vec![(Poly::one(f.n_vars()), f.clone(), power_cert)],
        };
        cert.verify()?;
        return Ok(cert);
    }
    // One homogeneous equation per non-base leaf over a shared variable
    // vector (base block first, then each other leaf's block):
    //   sum_i gen_base_i y_base_i - sum_j gen_leaf_j y_leaf_j = 0.
    // The leaf certificates solve it; kernel generators give the components.
    let n_vars = f.n_vars();
    let blocks: Vec<&Vec<Poly>> = leaves.iter().map(|(g, _)| g).collect();
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut equations: Vec<Vec<Poly>> = Vec::new();
    let mut offset_of = vec![0usize; leaves.len()];
    {
        let mut off = 0usize;
        for (li, b) in blocks.iter().enumerate() {
            offset_of[li] = off;
            off += b.len();
        }
    }
    for li in 0..leaves.len() {
        if li == base_leaf {
            continue;
        }
        let mut row = vec![Poly::zero(n_vars); total];
        for (gi, g) in base_gens.iter().enumerate() {
            row[offset_of[base_leaf] + gi] = g.clone();
        }
        for (gi, g) in blocks[li].iter().enumerate() {
            row[offset_of[li] + gi] = g.neg();
        }
        equations.push(row);
    }
    let max_cof_deg = leaves
        .iter()
        .flat_map(|(_, c)| c.cofactors.iter().map(Poly::total_degree))
        .max()
        .unwrap_or(0);
    let syz = syzygy_generators_system(&equations, max_cof_deg)?;
    let mut solution = vec![Poly::zero(n_vars); total];
    for (li, (_, cert)) in leaves.iter().enumerate() {
        for (gi, c) in cert.cofactors.iter().enumerate() {
            solution[offset_of[li] + gi] = c.clone();
        }
    }
    let Some(mult) = module_membership(&solution, &syz, max_cof_deg + 1)? else {
        return Err(PolyError::Domain("leaf solution not in the kernel module".into()));
    };
    // components: r_j = sum_i gen_base_i * (kernel_j at base positions);
    // by the paired equations the same value lies in every leaf ideal
    let mut parts = Vec::new();
    for (j, basis_vec) in syz.iter().enumerate() {
        if mult[j].is_zero() {
            continue;
        }
        let mut r = Poly::zero(n_vars);
        for (gi, g) in base_gens.iter().enumerate() {
            r = r.add(&g.mul(&basis_vec[offset_of[base_leaf] + gi]));
        }
        if r.is_zero() {
            continue;
        }
        let power_cert = power_certificate(&r, gens, depth, solve_degree)?;
        parts.push((mult[j].clone(), r, power_cert));
    }
    let cert = RadicalCert { f: base_cert.target.clone(), depth, parts };
    cert.verify()?;
    Ok(cert)
}

/// Certifies `r^(2^depth)` as an ideal member by bounded membership.
fn power_certificate(
    r: &Poly,
    gens: &[Poly],
    depth: u32,
    solve_degree: u64,
) -> Result<MembershipCert, PolyError> {
    let power = r.pow(1u64 << depth);
    let mut degree = solve_degree.max(power.total_degree());
    // widen once if the first bound misses
    for _ in 0..2 {
        if let Some(c) = membership_bounded(&power, gens, degree)? {
            return Ok(c);
        }
        degree += power.total_degree() + 1;
    }
    Err(PolyError::Domain(format!(
        "no certificate for the 2^{depth} power within degree {degree}"
    )))
}

/// Extends an existing power certificate `f^k` in the ideal to `f^E` by
/// multiplying through with `f^(E-k)`. Searches the least `k <= cap` first.
pub fn rabinowitsch_bound_check(
    gens: &[Poly],
    f: &Poly,
    exponent: u64,
    search_cap: u64,
    solve_degree: u64,
) -> Result<MembershipCert, PolyError> {
    let mut base: Option<(u64, MembershipCert)> = None;
    for k in 1..=search_cap.min(exponent) {
        let fk = f.pow(k);
        if let Some(c) = membership_bounded(&fk, gens, solve_degree)? {
            base = Some((k, c));
            break;
        }
    }
    let Some((k, cert)) = base else {
        return Err(PolyError::Domain(format!(
            "no base certificate: f^k not found for k <= {}",
            search_cap.min(exponent)
        )));
    };
    let extended = cert.scale_by(&f.pow(exponent - k))?;
    extended.verify()?;
    Ok(extended)
}

#[derive(Clone, Debug)]
pub struct PrimeViolation {
    pub f: Poly,
    pub g: Poly,
    pub product_cert: MembershipCert,
}

/// Checks "prime up to `b`" against a finite pool of candidate pairs: a
/// violation is a pair whose product is certified inside while neither
/// factor is found inside at the same bound. An empty list means prime up to
/// `b` relative to the pool, nothing more.
pub fn prime_up_to_check(
    gens: &[Poly],
    b: u64,
    pool: &[(Poly, Poly)],
    solve_degree: u64,
) -> Result<Vec<PrimeViolation>, PolyError> {
    let mut out = Vec::new();
    for (f, g) in pool {
        if f.total_degree() > b || g.total_degree() > b {
            return Err(PolyError::Domain(format!(
                "pool pair ({f}, {g}) exceeds degree {b}"
            )));
        }
        let prod = f.mul(g);
        let Some(product_cert) = membership_bounded(&prod, gens, solve_degree)? else {
            continue;
        };
        if membership_bounded(f, gens, solve_degree)?.is_some() {
            continue;
        }
        if membership_bounded(g, gens, solve_degree)?.is_some() {
            continue;
        }
        out.push(PrimeViolation { f: f.clone(), g: g.clone(), product_cert });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Poly {
        Poly::parse(n, s).unwrap()
    }

    #[test]
    fn direct_member_is_a_single_leaf() {
        let gens = [p(2, "x1"), p(2, "x2")];
        let f = p(2, "x1 + x2");
        let mut oracle = |_: &[Poly]| -> Option<(Poly, Poly)> { None };
        let cert = radical_tree(&gens, &f, 1, &mut oracle, 4).unwrap();
        assert_eq!(cert.depth, 0);
        cert.verify().unwrap();
    }

    #[test]
    fn one_split_on_x_squared() {
        // ideal (x^2), f = x: f not a member, oracle splits x*x
        let gens = [p(1, "x1^2")];
        let f = p(1, "x1");
        let mut oracle = |_: &[Poly]| Some((p(1, "x1"), p(1, "x1")));
        let cert = radical_tree(&gens, &f, 2, &mut oracle, 4).unwrap();
        assert_eq!(cert.depth, 1);
        cert.verify().unwrap();
    }

    #[test]
    fn square_ideal_instance() {
        // (x,y)^2 with f = x + y: one split by (x+y, x+y)
        let gens = [p(2, "x1^2"), p(2, "x1*x2"), p(2, "x2^2")];
        let f = p(2, "x1 + x2");
        let mut oracle = |_: &[Poly]| Some((p(2, "x1 + x2"), p(2, "x1 + x2")));
        let cert = radical_tree(&gens, &f, 2, &mut oracle, 4).unwrap();
        cert.verify().unwrap();
        assert!(cert.depth >= 1);
    }

    #[test]
    fn precondition_failure() {
        let gens = [p(1, "x1^2")];
        let f = p(1, "x1 + 1");
        let mut oracle = |_: &[Poly]| -> Option<(Poly, Poly)> { None };
        assert!(radical_tree(&gens, &f, 3, &mut oracle, 6).is_err());
    }

    #[test]
    fn rabinowitsch_extension() {
        // f = x in (x^2): base k = 2, extend to E = 5
        let gens = [p(1, "x1^2")];
        let cert = rabinowitsch_bound_check(&gens, &p(1, "x1"), 5, 4, 4).unwrap();
        assert_eq!(cert.target, p(1, "x1^5"));
    }

    #[test]
    fn member_extends_trivially() {
        let gens = [p(2, "x1 + x2")];
        let cert = rabinowitsch_bound_check(&gens, &p(2, "x1 + x2"), 3, 2, 4).unwrap();
        cert.verify().unwrap();
    }

    #[test]
    fn prime_pool_checks() {
        // (x1): yz pair is no violation
        let gens = [p(3, "x1")];
        let pool = [(p(3, "x2"), p(3, "x3"))];
        assert!(prime_up_to_check(&gens, 2, &pool, 4).unwrap().is_empty());
        // (x1 x2) catches (x1, x2)
        let gens = [p(2, "x1*x2")];
        let pool = [(p(2, "x1"), p(2, "x2"))];
        let v = prime_up_to_check(&gens, 2, &pool, 4).unwrap();
        assert_eq!(v.len(), 1);
        // (x1^2) catches (x1, x1) in an exhaustive monomial pool
        let gens = [p(2, "x1^2")];
        let mut pool = Vec::new();
        for a in ["x1", "x2", "x1*x2", "x1^2", "x2^2"] {
            for b in ["x1", "x2", "x1*x2", "x1^2", "x2^2"] {
                pool.push((p(2, a), p(2, b)));
            }
        }
        let v = prime_up_to_check(&gens, 2, &pool, 6).unwrap();
        assert!(v.iter().any(|v| v.f == p(2, "x1") && v.g == p(2, "x1")));
    }
}
