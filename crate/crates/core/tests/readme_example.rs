//! The quick-start snippet from the README, kept compiling and true.

use ndcantor::{one_prime, ArithmeticContext, BijectionKind, Branch, NDNumber};
use num::rational::BigRational;

#[test]
fn readme_quick_start() {
    let ctx = ArithmeticContext::new(BijectionKind::QuaternaryCantor(Branch::Plus));
    let one = one_prime(&ctx);
    assert_eq!(*one.upper(), BigRational::from_integer(2.into()));

    let x = NDNumber::from_lower(ctx.clone(), BigRational::new(1.into(), 3.into()));
    assert!(x.sub(&x).unwrap().is_zero_prime());
}
