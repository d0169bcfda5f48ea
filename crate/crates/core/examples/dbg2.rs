use diffbound_core::budget::Budget;
use diffbound_core::growth::{iterate, MonotoneFn};
use num::BigUint;
use diffbound_core::ordinal::Ordinal;
fn main() {
    let g = MonotoneFn::successor();
    let alpha: Ordinal = "w^(w^(w^3*2+1)+1) + 1".parse().unwrap();
    let beta: Ordinal = "w^(w^(w^2*2+3)*2)*2 + 1".parse().unwrap();
    let sum = alpha.left_sum(&beta);
    for steps in [10u64, 20, 40, 80] {
        let t = std::time::Instant::now();
        let v = iterate(&g, &sum, &BigUint::from(4u32), &Budget::new(64, steps));
        eprintln!("steps {steps}: {:?} in {:?}", v.is_exact(), t.elapsed());
    }
}
