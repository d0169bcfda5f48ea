//! Textual bound-function specs: affine expressions in `i` such as `i+2`,
//! `2*i+1`, `3*i`, `i`, or a constant.

use anyhow::{bail, Result};
use diffbound_core::growth::MonotoneFn;

pub fn parse_fn(spec: &str) -> Result<MonotoneFn> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let (mul, rest) = if let Some(star) = s.find('*') {
        let (a, b) = s.split_at(star);
        let mul: u64 = a.parse().map_err(|_| anyhow::anyhow!("bad coefficient in {spec:?}"))?;
        (mul, &b[1..])
    } else if s.starts_with('i') {
        (1, s.as_str())
    } else {
        // pure constant
        let c: u64 = s.parse().map_err(|_| anyhow::anyhow!("bad function spec {spec:?}"))?;
        return Ok(MonotoneFn::affine(0, c));
    };
    if !rest.starts_with('i') {
        bail!("expected `i` in function spec {spec:?}");
    }
    let tail = &rest[1..];
    let add = if tail.is_empty() {
        0
    } else if let Some(b) = tail.strip_prefix('+') {
        b.parse().map_err(|_| anyhow::anyhow!("bad offset in {spec:?}"))?
    } else {
        bail!("unexpected trailing {tail:?} in function spec {spec:?}");
    };
    Ok(MonotoneFn::affine(mul, add))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigUint;

    #[test]
    fn forms() {
        let f = parse_fn("i+2").unwrap();
        assert_eq!(f.eval(&BigUint::from(3u32)), BigUint::from(5u32));
        let f = parse_fn("2*i+1").unwrap();
        assert_eq!(f.eval(&BigUint::from(3u32)), BigUint::from(7u32));
        let f = parse_fn("2*i").unwrap();
        assert_eq!(f.eval(&BigUint::from(3u32)), BigUint::from(6u32));
        let f = parse_fn("i").unwrap();
        assert_eq!(f.eval(&BigUint::from(3u32)), BigUint::from(3u32));
        let f = parse_fn("7").unwrap();
        assert_eq!(f.eval(&BigUint::from(3u32)), BigUint::from(7u32));
        assert!(parse_fn("i^2").is_err());
    }
}
