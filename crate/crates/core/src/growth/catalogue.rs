//! The bound-function catalogue: every named bound as a symbolic expression
//! with deterministic printing and budgeted exact evaluation.
//!
//! Catalogue names, exactly as surfaced on the command line:
//! `d_n, e, zeta0, zeta1, zeta2, p_n, g, m, m_star, u_F, u_plus_F, f_F, h,
//! D_sat, i_sat, D_cohere, i_cohere, z_k, F_char, D_char, i_char, k, j`.

use super::frak_h::frak_h_fallible;
use super::multiset::Multiset;
use super::{frak_m, iterate, MonotoneFn};
use crate::budget::{Budget, Eval, Residue, ResidueReason};
use crate::ordinal::Ordinal;
use num::{BigUint, One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogueError {
    #[error("unknown catalogue name {0:?}")]
    UnknownName(String),
    #[error("{name} expects {expect} numeric argument(s), got {got}")]
    Arity { name: String, expect: usize, got: usize },
    #[error("{name} expects {expect} function argument(s), got {got}")]
    FnArity { name: String, expect: usize, got: usize },
    #[error("{0}")]
    Domain(String),
    #[error("unbound variable {0:?}")]
    UnboundVar(String),
    #[error("unbound function {0:?}")]
    UnboundFn(String),
}

/// Reference to a monotone function inside an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FnRef {
    /// The successor benchmark.
    Successor,
    /// Resolved from the evaluation environment by name.
    Named(String),
}

impl FnRef {
    fn name(&self) -> &str {
        match self {
            FnRef::Successor => "G",
            FnRef::Named(s) => s,
        }
    }
}

/// Symbolic bound expression. Evaluation is exact under a budget; printing
/// is a stable s-expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundExpr {
    Const(BigUint),
    Var(String),
    Add(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    Pow(Box<BoundExpr>, Box<BoundExpr>),
    Binom(Box<BoundExpr>, Box<BoundExpr>),
    Max(Box<BoundExpr>, Box<BoundExpr>),
    /// Catalogue call with numeric and function arguments.
    Call { name: String, nat_args: Vec<BoundExpr>, fn_args: Vec<FnRef> },
    /// Ordinal-indexed iteration of a function.
    Iter { f: FnRef, index: Ordinal, arg: Box<BoundExpr> },
}

impl BoundExpr {
    pub fn nat(n: impl Into<BigUint>) -> Self {
        BoundExpr::Const(n.into())
    }

    pub fn var(s: impl Into<String>) -> Self {
        BoundExpr::Var(s.into())
    }

    pub fn to_sexpr(&self) -> String {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        s
    }

    fn write_sexpr(&self, out: &mut String) {
        match self {
            BoundExpr::Const(c) => {
                let _ = write!(out, "{c}");
            }
            BoundExpr::Var(v) => {
                let _ = write!(out, "{v}");
            }
            BoundExpr::Add(a, b) => Self::binary(out, "+", a, b),
            BoundExpr::Mul(a, b) => Self::binary(out, "*", a, b),
            BoundExpr::Pow(a, b) => Self::binary(out, "^", a, b),
            BoundExpr::Binom(a, b) => Self::binary(out, "binom", a, b),
            BoundExpr::Max(a, b) => Self::binary(out, "max", a, b),
            BoundExpr::Call { name, nat_args, fn_args } => {
                let _ = write!(out, "({name}");
                for f in fn_args {
                    let _ = write!(out, " (fn {})", f.name());
                }
                for a in nat_args {
                    out.push(' ');
                    a.write_sexpr(out);
                }
                out.push(')');
            }
            BoundExpr::Iter { f, index, arg } => {
                let _ = write!(out, "(iter {} \"{}\" ", f.name(), index);
                arg.write_sexpr(out);
                out.push(')');
            }
        }
    }

    fn binary(out: &mut String, op: &str, a: &BoundExpr, b: &BoundExpr) {
        let _ = write!(out, "({op} ");
        a.write_sexpr(out);
        out.push(' ');
        b.write_sexpr(out);
        out.push(')');
    }
}

/// Variable and function bindings for evaluation.
#[derive(Default, Clone)]
pub struct EvalEnv {
    pub vars: BTreeMap<String, BigUint>,
    pub fns: BTreeMap<String, MonotoneFn>,
}

impl EvalEnv {
    pub fn with_var(mut self, name: &str, v: impl Into<BigUint>) -> Self {
        self.vars.insert(name.into(), v.into());
        self
    }

    pub fn with_fn(mut self, name: &str, f: MonotoneFn) -> Self {
        self.fns.insert(name.into(), f);
        self
    }

    fn resolve(&self, f: &FnRef) -> Result<MonotoneFn, CatalogueError> {
        match f {
            FnRef::Successor => Ok(MonotoneFn::successor()),
            FnRef::Named(n) => self
                .fns
                .get(n)
                .cloned()
                .ok_or_else(|| CatalogueError::UnboundFn(n.clone())),
        }
    }
}

/// `(name, numeric arity, function arity)` for every catalogue entry.
pub const CATALOGUE: &[(&str, usize, usize)] = &[
    ("d_n", 2, 0),
    ("e", 2, 0),
    ("zeta0", 2, 0),
    ("zeta1", 3, 0),
    ("zeta2", 3, 0),
    ("p_n", 2, 0),
    ("g", 2, 0),
    ("m", usize::MAX, 1), // variadic: i, then the multiset elements
    ("m_star", 1, 1),
    ("u_F", 1, 1),
    ("u_plus_F", 1, 1),
    ("f_F", 1, 1),
    ("h", 2, 1),
    ("D_sat", 2, 0),
    ("i_sat", 3, 0),
    ("D_cohere", 4, 0),
    ("i_cohere", 3, 0),
    ("z_k", 3, 0),
    ("F_char", 2, 0),
    ("D_char", 4, 0),
    ("i_char", 3, 0),
    ("k", 2, 0),
    ("j", 4, 1),
];

/// Builds a catalogue call, checking the name and arity.
pub fn expr(
    name: &str,
    nat_args: Vec<BigUint>,
    fn_args: Vec<FnRef>,
) -> Result<BoundExpr, CatalogueError> {
    let Some(&(_, na, fa)) = CATALOGUE.iter().find(|(n, _, _)| *n == name) else {
        return Err(CatalogueError::UnknownName(name.into()));
    };
    if na != usize::MAX && nat_args.len() != na {
        return Err(CatalogueError::Arity { name: name.into(), expect: na, got: nat_args.len() });
    }
    if name == "m" && nat_args.is_empty() {
        return Err(CatalogueError::Arity { name: name.into(), expect: 1, got: 0 });
    }
    if fn_args.len() != fa {
        return Err(CatalogueError::FnArity { name: name.into(), expect: fa, got: fn_args.len() });
    }
    Ok(BoundExpr::Call {
        name: name.into(),
        nat_args: nat_args.into_iter().map(BoundExpr::Const).collect(),
        fn_args,
    })
}

type R = Result<BigUint, Residue>;

/// `x - 1` saturating at zero (the bound formulas subtract one in places
/// where tiny arguments would underflow).
fn sat_sub1(x: BigUint) -> BigUint {
    if x.is_zero() {
        x
    } else {
        x - 1u32
    }
}

fn residue(lower: BigUint, frontier: &str) -> Residue {
    Residue { lower_bound: lower, reason: ResidueReason::BitsExceeded, frontier: frontier.into() }
}

fn check(budget: &Budget, v: BigUint, frontier: &str) -> R {
    if budget.admits(&v) {
        Ok(v)
    } else {
        Err(residue(bit_floor(budget), frontier))
    }
}

/// A certified value known to fit the budget, used as a residue floor.
fn bit_floor(budget: &Budget) -> BigUint {
    (BigUint::one() << budget.bits.min(1 << 24)) - 1u32
}

fn c_pow(base: &BigUint, exp: &BigUint, budget: &Budget, frontier: &str) -> R {
    if base.is_zero() {
        return Ok(if exp.is_zero() { BigUint::one() } else { BigUint::zero() });
    }
    if base.is_one() {
        return Ok(BigUint::one());
    }
    let Ok(e) = u64::try_from(exp) else {
        return Err(residue(base.clone(), frontier));
    };
    if base.bits().saturating_mul(e) > budget.bits + 64 {
        return Err(residue(bit_floor(budget), frontier));
    }
    check(budget, num::pow::pow(base.clone(), e as usize), frontier)
}

fn c_binom(n: &BigUint, k: &BigUint, budget: &Budget, frontier: &str) -> R {
    if k > n {
        return Ok(BigUint::zero());
    }
    let Ok(k) = u64::try_from(k) else {
        return Err(residue(BigUint::one(), frontier));
    };
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
        if !budget.admits(&acc) {
            return Err(residue(bit_floor(budget), frontier));
        }
    }
    Ok(acc)
}

/// `d_n(b) = (2b)^(2^n)`.
fn eval_d_n(n: &BigUint, b: &BigUint, budget: &Budget) -> R {
    let two_b = b * 2u32;
    let Ok(nsmall) = u64::try_from(n) else {
        return Err(residue(two_b, "d_n"));
    };
    if nsmall >= 64 {
        return Err(residue(two_b, "d_n"));
    }
    let exp = BigUint::one() << nsmall;
    c_pow(&two_b, &exp, budget, "d_n")
}

/// `e(n,b) = 2^((b + d_{n-1}(b))^(n-1) + 1) * b + b + d_{n-1}(b)`, `n >= 1`.
fn eval_e(n: &BigUint, b: &BigUint, budget: &Budget) -> Result<R, CatalogueError> {
    if n.is_zero() {
        return Err(CatalogueError::Domain("e(n, b) requires n >= 1".into()));
    }
    let nm1 = n - 1u32;
    Ok((|| {
        let d = eval_d_n(&nm1, b, budget)?;
        let inner = c_pow(&(b + &d), &nm1, budget, "e")?;
        let pow2 = c_pow(&BigUint::from(2u32), &(inner + 1u32), budget, "e")?;
        check(budget, pow2 * b + b + d, "e")
    })())
}

/// `zeta0(n,d) = C(n + d_n(d), n)`.
fn eval_zeta0(n: &BigUint, d: &BigUint, budget: &Budget) -> R {
    let dn = eval_d_n(n, d, budget)?;
    c_binom(&(n + &dn), n, budget, "zeta0")
}

/// `zeta1(n,d,b) = (C(b+n, n) + 2) * zeta0(n,d)`.
fn eval_zeta1(n: &BigUint, d: &BigUint, b: &BigUint, budget: &Budget) -> R {
    let z0 = eval_zeta0(n, d, budget)?;
    let bn = c_binom(&(b + n), n, budget, "zeta1")?;
    check(budget, (bn + 2u32) * z0, "zeta1")
}

/// `zeta2(n,d,b) = (zeta1 + 1)^(2^zeta1 - 1)`.
fn eval_zeta2(n: &BigUint, d: &BigUint, b: &BigUint, budget: &Budget) -> R {
    let z1 = eval_zeta1(n, d, b, budget)?;
    let exp = c_pow(&BigUint::from(2u32), &z1, budget, "zeta2")? - 1u32;
    c_pow(&(z1 + 1u32), &exp, budget, "zeta2")
}

/// `p_1(d) = d`; `p_n(d) = max{2 C(ups+n, n) ups, e(n-1, d)}` with
/// `ups = zeta1(n-1, p_{n-1}(d), d) * zeta2(n-1, p_{n-1}(d), d)`.
fn eval_p(n: &BigUint, d: &BigUint, budget: &Budget) -> Result<R, CatalogueError> {
    if n.is_zero() {
        return Err(CatalogueError::Domain("p_n requires n >= 1".into()));
    }
    if n.is_one() {
        return Ok(Ok(d.clone()));
    }
    let nm1 = n - 1u32;
    let prev = match eval_p(&nm1, d, budget)? {
        Ok(v) => v,
        Err(r) => return Ok(Err(r)),
    };
    Ok((|| {
        let z1 = eval_zeta1(&nm1, &prev, d, budget)?;
        let z2 = eval_zeta2(&nm1, &prev, d, budget)?;
        let ups = check(budget, z1 * z2, "p_n")?;
        let lhs = check(budget, c_binom(&(&ups + n), n, budget, "p_n")? * 2u32 * &ups, "p_n")?;
        let rhs = match eval_e(&nm1, d, budget) {
            Ok(r) => r?,
            Err(_) => unreachable!("n >= 2 here"),
        };
        Ok(lhs.max(rhs))
    })())
}

/// `g(b,d) = d * (1+b)^d`.
fn eval_g(b: &BigUint, d: &BigUint, budget: &Budget) -> R {
    let p = c_pow(&(b + 1u32), d, budget, "g")?;
    check(budget, p * d, "g")
}

/// Fallible monotone function: `None` when the budget is exhausted.
type FF<'a> = &'a dyn Fn(&BigUint) -> Option<BigUint>;

/// The multiset length recursion over a fallible bound function, counting
/// steps against the budget. Returns `Ok(count)` or a residue whose lower
/// bound is the number of steps already performed.
fn m_loop(tau: &Multiset, start: &BigUint, d: FF<'_>, budget: &Budget) -> R {
    let mut tau = tau.clone();
    let mut i = start.clone();
    let mut count = BigUint::zero();
    let mut steps = 0u64;
    while let Some(k) = tau.min() {
        if k == 0 {
            let zeros = tau.multiplicity(0);
            count += &zeros;
            i += &zeros;
            tau.remove_all(0);
            continue;
        }
        steps += 1;
        if steps > budget.steps {
            return Err(Residue {
                lower_bound: count,
                reason: ResidueReason::StepsExceeded,
                frontier: "m".into(),
            });
        }
        let di = d(&i).ok_or_else(|| Residue {
            lower_bound: count.clone(),
            reason: ResidueReason::StepsExceeded,
            frontier: "m".into(),
        })?;
        let copies = BigUint::from(k) * (di - 1u32);
        tau.remove_one(k);
        tau.insert_many(k - 1, copies);
        count += 1u32;
        i += 1u32;
        if !budget.admits(&tau.size()) {
            return Err(Residue {
                lower_bound: count,
                reason: ResidueReason::BitsExceeded,
                frontier: "m".into(),
            });
        }
    }
    Ok(count)
}

/// `u_F(x) = F_x^{m*(i -> F_x^i(x), x)}(x)` with `F_d(b) = F(p_d(b))`.
fn eval_u_f(f: FF<'_>, x: &BigUint, budget: &Budget) -> R {
    let fx = |b: &BigUint| -> Option<BigUint> {
        let p = match eval_p(x, b, budget) {
            Ok(Ok(v)) => v,
            _ => return None,
        };
        let v = f(&p)?;
        budget.admits(&v).then_some(v)
    };
    let Ok(xsmall) = u64::try_from(x) else {
        return Err(residue(x.clone(), "u_F"));
    };
    if x.is_zero() {
        return Err(residue(BigUint::zero(), "u_F"));
    }
    // D(i) = F_x^i(x), evaluated incrementally as i climbs
    let cache = std::cell::RefCell::new((BigUint::zero(), x.clone()));
    let dfn = |i: &BigUint| -> Option<BigUint> {
        let (ref mut at, ref mut val) = *cache.borrow_mut();
        if i < at {
            // the m-loop only moves forward; restart defensively
            *at = BigUint::zero();
            *val = x.clone();
        }
        let mut guard = 0u64;
        while &*at < i {
            *val = fx(val)?;
            *at += 1u32;
            guard += 1;
            if guard > budget.steps {
                return None;
            }
        }
        Some(val.clone())
    };
    let dfn_plus = |i: &BigUint| dfn(i).map(|v| v + 1u32);
    let tau = Multiset::singleton(xsmall);
    let steps = m_loop(&tau, &BigUint::zero(), &dfn_plus, budget)?;
    let reps = steps + 1u32;
    // u = F_x^reps(x)
    let Ok(reps_small) = u64::try_from(&reps) else {
        return Err(residue(x.clone(), "u_F"));
    };
    if reps_small > budget.steps {
        return Err(residue(x.clone(), "u_F"));
    }
    let mut v = x.clone();
    for _ in 0..reps_small {
        v = fx(&v).ok_or_else(|| residue(v.clone(), "u_F"))?;
    }
    Ok(v)
}

/// `u_plus_F(b) = max{u_F(b), d_{b+1}(2b C(2b,b) + 1)}`.
fn eval_u_plus(f: FF<'_>, b: &BigUint, budget: &Budget) -> R {
    let central = c_binom(&(b * 2u32), b, budget, "u_plus_F")?;
    let arg = b * 2u32 * central + 1u32;
    let second = eval_d_n(&(b + 1u32), &arg, budget)?;
    let first = eval_u_f(f, b, budget)?;
    Ok(first.max(second))
}

/// `f_F(b) = d_{u+}(C(N+b, b) * u+) + N` with `N = d_{u+}(u+) + u+`.
fn eval_f_f(f: FF<'_>, b: &BigUint, budget: &Budget) -> R {
    let uplus = eval_u_plus(f, b, budget)?;
    let n = eval_d_n(&uplus, &uplus, budget)? + &uplus;
    let inner = c_binom(&(&n + b), b, budget, "f_F")? * &uplus;
    let outer = eval_d_n(&uplus, &inner, budget)?;
    check(budget, outer + n, "f_F")
}

/// `D_sat_b(i)`: iterate `x -> g(x, b)` from `b`, `i` times.
fn eval_d_sat(b: &BigUint, i: &BigUint, budget: &Budget) -> R {
    let Ok(steps) = u64::try_from(i) else {
        return Err(residue(b.clone(), "D_sat"));
    };
    let mut x = b.clone();
    for _ in 0..steps.min(budget.steps) {
        x = eval_g(&x, b, budget).map_err(|mut r| {
            r.frontier = "D_sat".into();
            r
        })?;
    }
    if steps > budget.steps {
        return Err(residue(x, "D_sat"));
    }
    Ok(x)
}

/// `i_sat(b) = D_sat_b(h_{n,m}(D_sat_b))`.
fn eval_i_sat(n: &BigUint, m: &BigUint, b: &BigUint, budget: &Budget) -> Result<R, CatalogueError> {
    let (nn, mm) = dims(n, m)?;
    let dsat = |i: &BigUint| eval_d_sat(b, i, budget).ok();
    let h = match frak_h_fallible(nn, mm, &dsat, &[], budget)
        .map_err(|e| CatalogueError::Domain(e.to_string()))?
    {
        Eval::Exact(v) => v,
        Eval::Residue(r) => {
            // D_sat is monotone in i, so pushing the lower bound through
            // keeps it certified
            let lower = eval_d_sat(b, &r.lower_bound, budget)
                .map(|v| v)
                .unwrap_or_else(|rr| rr.lower_bound);
            return Ok(Err(residue(lower, "i_sat")));
        }
    };
    Ok(eval_d_sat(b, &h, budget))
}

/// One step of the coherence tower:
/// `x -> g(x, C(2x + m - 1, m - 1) * n * (x+1))`.
fn cohere_step(x: &BigUint, n: &BigUint, m: &BigUint, budget: &Budget) -> R {
    let m1 = sat_sub1(m.clone());
    let arg = c_binom(&(x * 2u32 + &m1), &m1, budget, "D_cohere")? * n * (x + 1u32);
    eval_g(x, &check(budget, arg, "D_cohere")?, budget)
}

fn eval_d_cohere(
    b: &BigUint,
    n: &BigUint,
    m: &BigUint,
    i: &BigUint,
    budget: &Budget,
) -> R {
    let Ok(steps) = u64::try_from(i) else {
        return Err(residue(b.clone(), "D_cohere"));
    };
    let mut x = b.clone();
    for _ in 0..steps.min(budget.steps) {
        x = cohere_step(&x, n, m, budget)?;
    }
    if steps > budget.steps {
        return Err(residue(x, "D_cohere"));
    }
    Ok(x)
}

fn eval_i_cohere(
    n: &BigUint,
    m: &BigUint,
    b: &BigUint,
    budget: &Budget,
) -> Result<R, CatalogueError> {
    let (nn, mm) = dims(n, m)?;
    let dc = |i: &BigUint| eval_d_cohere(b, n, m, i, budget).ok();
    let h = match frak_h_fallible(nn, mm, &dc, &[], budget)
        .map_err(|e| CatalogueError::Domain(e.to_string()))?
    {
        Eval::Exact(v) => v,
        Eval::Residue(r) => {
            let lower = eval_d_cohere(b, n, m, &r.lower_bound, budget)
                .unwrap_or_else(|rr| rr.lower_bound);
            return Ok(Err(residue(lower, "i_cohere")));
        }
    };
    Ok(eval_d_cohere(b, n, m, &h, budget))
}

/// One unfolding of the Rosenfeld exponent bound:
/// `d -> d_{b+d}((g(b+d-1, max{b+d-1, 2b}) + d + 1) C(2b,b) 2b + d)
///       + g(b+d-1, max{b+d-1, 2b}) + d + 1`.
fn z_step(d: &BigUint, b: &BigUint, budget: &Budget) -> R {
    let bd1 = sat_sub1(b + d);
    let gmax = eval_g(&bd1, &bd1.clone().max(b * 2u32), budget)?;
    let central = c_binom(&(b * 2u32), b, budget, "z_k")?;
    let inner = (&gmax + d + 1u32) * central * b * 2u32 + d;
    let dn = eval_d_n(&(b + d), &check(budget, inner, "z_k")?, budget)?;
    check(budget, dn + gmax + d + 1u32, "z_k")
}

/// `z^0(d,b) = d`, `z^{k+1}(d,b) = z^k(step(d,b), b)`.
fn eval_z(k: &BigUint, d: &BigUint, b: &BigUint, budget: &Budget) -> R {
    let Ok(k) = u64::try_from(k) else {
        return Err(residue(d.clone(), "z_k"));
    };
    let mut x = d.clone();
    for _ in 0..k {
        x = z_step(&x, b, budget)?;
    }
    Ok(x)
}

/// `F_char_c(k) = z^{k+1}(k, g(c,k))`.
fn eval_f_char(c: &BigUint, k: &BigUint, budget: &Budget) -> R {
    let gb = eval_g(c, k, budget)?;
    eval_z(&(k + 1u32), k, &gb, budget)
}

fn eval_d_char(
    b: &BigUint,
    n: &BigUint,
    m: &BigUint,
    i: &BigUint,
    budget: &Budget,
) -> Result<R, CatalogueError> {
    let Ok(steps) = u64::try_from(i) else {
        return Ok(Err(residue(b.clone(), "D_char")));
    };
    let mut x = b.clone();
    for _ in 0..steps {
        match d_char_step(&x, n, m, budget)? {
            Ok(v) => x = v,
            Err(r) => return Ok(Err(r)),
        }
    }
    Ok(Ok(x))
}

fn d_char_step(
    x: &BigUint,
    n: &BigUint,
    m: &BigUint,
    budget: &Budget,
) -> Result<R, CatalogueError> {
    Ok((|| {
        let first = cohere_step(x, n, m, budget)?;
        let fchar = |k: &BigUint| eval_f_char(x, k, budget).ok();
        let u = eval_u_f(&fchar, x, budget)?;
        let second = match eval_p(x, &u, budget) {
            Ok(r) => r?,
            Err(e) => return Err(residue_from_domain(e, x)),
        };
        let third = eval_f_f(&fchar, x, budget)?;
        Ok(first.max(second).max(third))
    })())
}

fn residue_from_domain(_e: CatalogueError, x: &BigUint) -> Residue {
    residue(x.clone(), "D_char")
}

fn eval_i_char(
    n: &BigUint,
    m: &BigUint,
    b: &BigUint,
    budget: &Budget,
) -> Result<R, CatalogueError> {
    let (nn, mm) = dims(n, m)?;
    let dc = |i: &BigUint| match eval_d_char(b, n, m, i, budget) {
        Ok(Ok(v)) => Some(v),
        _ => None,
    };
    let h = match frak_h_fallible(nn, mm, &dc, &[], budget)
        .map_err(|e| CatalogueError::Domain(e.to_string()))?
    {
        Eval::Exact(v) => v,
        Eval::Residue(r) => {
            let lower = match eval_d_char(b, n, m, &r.lower_bound, budget)? {
                Ok(v) => v,
                Err(rr) => rr.lower_bound,
            };
            return Ok(Err(residue(lower, "i_char")));
        }
    };
    eval_d_char(b, n, m, &h, budget)
}

fn dims(n: &BigUint, m: &BigUint) -> Result<(usize, usize), CatalogueError> {
    let nn = usize::try_from(n)
        .map_err(|_| CatalogueError::Domain("indeterminate count too large".into()))?;
    let mm = usize::try_from(m)
        .map_err(|_| CatalogueError::Domain("derivation count too large".into()))?;
    Ok((nn, mm))
}

/// The closed-form iteration index of the chain-stabilization bound:
/// `w^(w^(w^(w^m) * n)) * 2 + w^(w^m * 2n + 2) * 3`.
pub fn j_ordinal(n: u64, m: u64) -> Ordinal {
    let wm = Ordinal::omega_pow(Ordinal::nat(m));
    let head = Ordinal::omega_pow(Ordinal::omega_pow(wm.natural_prod(&Ordinal::nat(n))));
    let tail_exp = wm
        .natural_prod(&Ordinal::nat(2 * n))
        .left_sum(&Ordinal::nat(2u32));
    head.natural_prod(&Ordinal::nat(2u32))
        .left_sum(&Ordinal::omega_pow_mul(tail_exp, 3u32))
}

/// Evaluates a bound expression exactly under the budget.
pub fn eval(e: &BoundExpr, env: &EvalEnv, budget: &Budget) -> Result<Eval, CatalogueError> {
    match eval_inner(e, env, budget)? {
        Ok(v) => Ok(Eval::Exact(v)),
        Err(r) => Ok(Eval::Residue(r)),
    }
}

fn eval_inner(e: &BoundExpr, env: &EvalEnv, budget: &Budget) -> Result<R, CatalogueError> {
    match e {
        BoundExpr::Const(c) => Ok(Ok(c.clone())),
        BoundExpr::Var(v) => env
            .vars
            .get(v)
            .cloned()
            .map(Ok)
            .ok_or_else(|| CatalogueError::UnboundVar(v.clone())),
        BoundExpr::Add(a, b) => Ok(binop(e, a, b, env, budget, |x, y| x + y)?),
        BoundExpr::Mul(a, b) => Ok(binop(e, a, b, env, budget, |x, y| x * y)?),
        BoundExpr::Max(a, b) => Ok(binop(e, a, b, env, budget, |x, y| x.max(y))?),
        BoundExpr::Pow(a, b) => {
            let (x, y) = match pair(a, b, env, budget)? {
                Ok(p) => p,
                Err(r) => return Ok(Err(r)),
            };
            Ok(c_pow(&x, &y, budget, "^"))
        }
        BoundExpr::Binom(a, b) => {
            let (x, y) = match pair(a, b, env, budget)? {
                Ok(p) => p,
                Err(r) => return Ok(Err(r)),
            };
            Ok(c_binom(&x, &y, budget, "binom"))
        }
        BoundExpr::Iter { f, index, arg } => {
            let g = env.resolve(f)?;
            let x = match eval_inner(arg, env, budget)? {
                Ok(v) => v,
                Err(r) => return Ok(Err(r)),
            };
            Ok(match iterate(&g, index, &x, budget) {
                Eval::Exact(v) => Ok(v),
                Eval::Residue(r) => Err(r),
            })
        }
        BoundExpr::Call { name, nat_args, fn_args } => {
            let mut args = Vec::with_capacity(nat_args.len());
            for a in nat_args {
                match eval_inner(a, env, budget)? {
                    Ok(v) => args.push(v),
                    Err(r) => return Ok(Err(r)),
                }
            }
            let fns: Vec<MonotoneFn> =
                fn_args.iter().map(|f| env.resolve(f)).collect::<Result<_, _>>()?;
            eval_call(name, &args, &fns, budget)
        }
    }
}

fn pair(
    a: &BoundExpr,
    b: &BoundExpr,
    env: &EvalEnv,
    budget: &Budget,
) -> Result<Result<(BigUint, BigUint), Residue>, CatalogueError> {
    let x = match eval_inner(a, env, budget)? {
        Ok(v) => v,
        Err(r) => return Ok(Err(r)),
    };
    let y = match eval_inner(b, env, budget)? {
        Ok(v) => v,
        Err(r) => return Ok(Err(r)),
    };
    Ok(Ok((x, y)))
}

fn binop(
    whole: &BoundExpr,
    a: &BoundExpr,
    b: &BoundExpr,
    env: &EvalEnv,
    budget: &Budget,
    op: impl Fn(BigUint, BigUint) -> BigUint,
) -> Result<R, CatalogueError> {
    let _ = whole;
    let (x, y) = match pair(a, b, env, budget)? {
        Ok(p) => p,
        Err(r) => return Ok(Err(r)),
    };
    Ok(check(budget, op(x, y), "arith"))
}

fn eval_call(
    name: &str,
    args: &[BigUint],
    fns: &[MonotoneFn],
    budget: &Budget,
) -> Result<R, CatalogueError> {
    let wrap = |f: &MonotoneFn| {
        let f = f.clone();
        let b = *budget;
        move |x: &BigUint| {
            let v = f.eval(x);
            b.admits(&v).then_some(v)
        }
    };
    match name {
        "d_n" => Ok(eval_d_n(&args[0], &args[1], budget)),
        "e" => eval_e(&args[0], &args[1], budget),
        "zeta0" => Ok(eval_zeta0(&args[0], &args[1], budget)),
        "zeta1" => Ok(eval_zeta1(&args[0], &args[1], &args[2], budget)),
        "zeta2" => Ok(eval_zeta2(&args[0], &args[1], &args[2], budget)),
        "p_n" => eval_p(&args[0], &args[1], budget),
        "g" => Ok(eval_g(&args[0], &args[1], budget)),
        "m" => {
            let i = args[0].clone();
            let elems: Vec<u64> = args[1..]
                .iter()
                .map(u64::try_from)
                .collect::<Result<_, _>>()
                .map_err(|_| CatalogueError::Domain("multiset element too large".into()))?;
            let tau = Multiset::from_elems(&elems);
            Ok(match frak_m(&tau, &fns[0], &i, budget) {
                Eval::Exact(v) => Ok(v),
                Eval::Residue(r) => Err(r),
            })
        }
        "m_star" => {
            let n = u64::try_from(&args[0])
                .map_err(|_| CatalogueError::Domain("m* argument too large".into()))?;
            Ok(match super::frak_m_star(&fns[0], n, budget) {
                Eval::Exact(v) => Ok(v),
                Eval::Residue(r) => Err(r),
            })
        }
        "u_F" => {
            let f = wrap(&fns[0]);
            Ok(eval_u_f(&f, &args[0], budget))
        }
        "u_plus_F" => {
            let f = wrap(&fns[0]);
            Ok(eval_u_plus(&f, &args[0], budget))
        }
        "f_F" => {
            let f = wrap(&fns[0]);
            Ok(eval_f_f(&f, &args[0], budget))
        }
        "h" => {
            let (nn, mm) = dims(&args[0], &args[1])?;
            Ok(
                match super::frak_h(nn, mm, &fns[0], &[], budget)
                    .map_err(|e| CatalogueError::Domain(e.to_string()))?
                {
                    Eval::Exact(v) => Ok(v),
                    Eval::Residue(r) => Err(r),
                },
            )
        }
        "D_sat" => Ok(eval_d_sat(&args[0], &args[1], budget)),
        "i_sat" => eval_i_sat(&args[0], &args[1], &args[2], budget),
        "D_cohere" => Ok(eval_d_cohere(&args[0], &args[1], &args[2], &args[3], budget)),
        "i_cohere" => eval_i_cohere(&args[0], &args[1], &args[2], budget),
        "z_k" => Ok(eval_z(&args[0], &args[1], &args[2], budget)),
        "F_char" => Ok(eval_f_char(&args[0], &args[1], budget)),
        "D_char" => eval_d_char(&args[0], &args[1], &args[2], &args[3], budget),
        "i_char" => eval_i_char(&args[0], &args[1], &args[2], budget),
        "k" => {
            let n = u64::try_from(&args[0])
                .map_err(|_| CatalogueError::Domain("k index too large".into()))?;
            let index = Ordinal::omega_pow(Ordinal::nat(n + 8));
            Ok(match iterate(&MonotoneFn::successor(), &index, &args[1], budget) {
                Eval::Exact(v) => Ok(v),
                Eval::Residue(r) => Err(r),
            })
        }
        "j" => {
            let n = u64::try_from(&args[0])
                .map_err(|_| CatalogueError::Domain("j index too large".into()))?;
            let m = u64::try_from(&args[1])
                .map_err(|_| CatalogueError::Domain("j index too large".into()))?;
            let i0 = &args[2];
            let d = &args[3];
            let index = j_ordinal(n, m);
            let start = d.clone().max(BigUint::from(n)).max(i0.clone());
            Ok(match iterate(&fns[0], &index, &start, budget) {
                Eval::Exact(v) => Ok(v),
                Eval::Residue(r) => Err(r),
            })
        }
        other => Err(CatalogueError::UnknownName(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn call(name: &str, args: &[u64]) -> BoundExpr {
        expr(name, args.iter().map(|&a| big(a)).collect(), vec![]).unwrap()
    }

    fn eval_nat(e: &BoundExpr) -> BigUint {
        match eval(e, &EvalEnv::default(), &Budget::default()).unwrap() {
            Eval::Exact(v) => v,
            Eval::Residue(r) => panic!("unexpected residue: {r:?}"),
        }
    }

    #[test]
    fn spot_values() {
        assert_eq!(eval_nat(&call("d_n", &[1, 1])), big(4));
        assert_eq!(eval_nat(&call("g", &[2, 3])), big(81));
        assert_eq!(eval_nat(&call("p_n", &[1, 7])), big(7));
        assert_eq!(eval_nat(&call("z_k", &[0, 9, 3])), big(9));
        assert_eq!(eval_nat(&call("F_char", &[2, 0])), big(1));
        // g(2,2) = 2 * 3^2 = 18
        assert_eq!(eval_nat(&call("g", &[2, 2])), big(18));
    }

    #[test]
    fn e_requires_positive_n() {
        assert!(matches!(
            eval(&call("e", &[0, 3]), &EvalEnv::default(), &Budget::default()),
            Err(CatalogueError::Domain(_))
        ));
    }

    #[test]
    fn e_small_value() {
        // e(1, b) = 2^(1+1... ) careful: (b + d_0(b))^0 + 1 = 2 exponent:
        // e(1,b) = 2^((b+2b)^0 + 1) b + b + 2b = 4b + 3b = 7b
        assert_eq!(eval_nat(&call("e", &[1, 2])), big(14));
    }

    #[test]
    fn m_star_through_catalogue() {
        let e = expr("m_star", vec![big(1)], vec![FnRef::Named("D".into())]).unwrap();
        let env = EvalEnv::default().with_fn("D", MonotoneFn::affine(1, 2));
        let v = eval(&e, &env, &Budget::default()).unwrap();
        // m*({1}, i+3)(0) + 1 = 4 (independent unroll)
        assert_eq!(v, Eval::Exact(big(4)));
    }

    #[test]
    fn zeta2_residues_fast() {
        let v = eval(&call("zeta2", &[2, 2, 2]), &EvalEnv::default(), &Budget::default()).unwrap();
        assert!(!v.is_exact());
    }

    #[test]
    fn p2_residues_under_default_budget() {
        // symbolic stays available even when evaluation gives up
        let e = call("p_n", &[2, 2]);
        assert_eq!(e.to_sexpr(), "(p_n 2 2)");
        let v = eval(&e, &EvalEnv::default(), &Budget::default()).unwrap();
        assert!(!v.is_exact());
    }

    #[test]
    fn k_small_evaluates_via_iteration() {
        // k-bound at n=0 is G^{w^8}(d): residue under tiny budget, but
        // deterministic symbolically
        let e = call("k", &[0, 1]);
        assert_eq!(e.to_sexpr(), "(k 0 1)");
        let v = eval(&e, &EvalEnv::default(), &Budget::new(64, 1 << 12)).unwrap();
        assert!(!v.is_exact());
    }

    #[test]
    fn sexprs_are_stable() {
        let e1 = call("i_char", &[2, 2, 3]).to_sexpr();
        let e2 = call("i_char", &[2, 2, 3]).to_sexpr();
        assert_eq!(e1, e2);
        assert_eq!(e1, "(i_char 2 2 3)");
        let it = BoundExpr::Iter {
            f: FnRef::Successor,
            index: "w^2*8".parse().unwrap(),
            arg: Box::new(BoundExpr::var("d")),
        };
        assert_eq!(it.to_sexpr(), "(iter G \"w^2*8\" d)");
    }

    #[test]
    fn j_ordinal_shape() {
        // n = m = 1: w^(w^w) * 2 + w^(w*2+2) * 3
        let o = j_ordinal(1, 1);
        assert_eq!(o.to_string(), "w^(w^w)*2 + w^(w*2+2)*3");
    }

    #[test]
    fn arity_errors() {
        assert!(expr("g", vec![big(1)], vec![]).is_err());
        assert!(expr("nope", vec![], vec![]).is_err());
        assert!(expr("m_star", vec![big(1)], vec![]).is_err());
    }
}
