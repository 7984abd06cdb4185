//! Pairs of X-elements with the conjugated complex product, plus the
//! conjugated trigonometric and exponential functions.

use std::sync::Arc;

use num::BigRational;

use crate::arithmetic::{factorial_prime, one_prime, zero_prime, ArithmeticContext, NDNumber};
use crate::dyadic;
use crate::error::Result;

/// An element of the non-Diophantine complex plane: a pair of
/// X-elements sharing one context. `(A1, 0')` is identified with `A1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NDComplex {
    pub re: NDNumber,
    pub im: NDNumber,
}

impl NDComplex {
    pub fn new(re: NDNumber, im: NDNumber) -> Result<Self> {
        // Reuse the context check from scalar addition.
        re.add(&im)?;
        Ok(NDComplex { re, im })
    }

    pub fn from_real(re: NDNumber) -> Self {
        let im = zero_prime(re.context());
        NDComplex { re, im }
    }

    pub fn context(&self) -> &Arc<ArithmeticContext> {
        self.re.context()
    }

    pub fn cadd(&self, other: &NDComplex) -> Result<NDComplex> {
        Ok(NDComplex {
            re: self.re.add(&other.re)?,
            im: self.im.add(&other.im)?,
        })
    }

    pub fn csub(&self, other: &NDComplex) -> Result<NDComplex> {
        Ok(NDComplex {
            re: self.re.sub(&other.re)?,
            im: self.im.sub(&other.im)?,
        })
    }

    /// (A1 B1 - A2 B2, A1 B2 + A2 B1), all in the conjugated arithmetic.
    pub fn cmul(&self, other: &NDComplex) -> Result<NDComplex> {
        let re = self.re.mul(&other.re)?.sub(&self.im.mul(&other.im)?)?;
        let im = self.re.mul(&other.im)?.add(&self.im.mul(&other.re)?)?;
        Ok(NDComplex { re, im })
    }

    pub fn conj(&self) -> NDComplex {
        NDComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// |A|^2' = A (.) A*, whose imaginary part vanishes identically.
    pub fn modulus_sq(&self) -> NDNumber {
        self.re
            .pow_nat(2)
            .add(&self.im.pow_nat(2))
            .expect("shared context")
    }
}

/// i' = (0', 1').
pub fn i_prime(ctx: &Arc<ArithmeticContext>) -> NDComplex {
    NDComplex {
        re: zero_prime(ctx),
        im: one_prime(ctx),
    }
}

fn lift(x: &NDNumber, lower: BigRational) -> NDNumber {
    NDNumber::from_lower(x.context().clone(), lower)
}

/// Cos X = f^-1(cos f(X)), dyadic at the context's precision.
pub fn nd_cos(x: &NDNumber) -> NDNumber {
    let prec = x.context().precision_bits;
    lift(x, dyadic::cos_dyadic(x.lower(), prec))
}

/// Sin X = f^-1(sin f(X)).
pub fn nd_sin(x: &NDNumber) -> NDNumber {
    let prec = x.context().precision_bits;
    lift(x, dyadic::sin_dyadic(x.lower(), prec))
}

/// Exp X = f^-1(exp f(X)).
pub fn nd_exp(x: &NDNumber) -> NDNumber {
    let prec = x.context().precision_bits;
    lift(x, dyadic::exp_dyadic(x.lower(), prec))
}

/// Exp(i' phi) = (Cos phi, Sin phi).
pub fn cexp_i(phi: &NDNumber) -> NDComplex {
    let prec = phi.context().precision_bits;
    let (c, s) = dyadic::cos_sin_dyadic(phi.lower(), prec);
    NDComplex {
        re: lift(phi, c),
        im: lift(phi, s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaylorKind {
    Cos,
    Sin,
    Exp,
}

/// Partial Taylor sum built from the non-Diophantine operations
/// themselves (powers, primed factorials, (+)-accumulation). `terms`
/// counts the series terms kept, so Cos with 2 terms is
/// 1' (-) X^2' (/) 2!'.
pub fn taylor_partial(kind: TaylorKind, x: &NDNumber, terms: u32) -> NDNumber {
    assert!(terms >= 1);
    let ctx = x.context();
    let mut acc = zero_prime(ctx);
    for k in 0..terms {
        let (power, parity) = match kind {
            TaylorKind::Exp => (k, 0),
            TaylorKind::Cos => (2 * k, k),
            TaylorKind::Sin => (2 * k + 1, k),
        };
        let term = x
            .pow_nat(power)
            .div(&factorial_prime(ctx, power))
            .expect("factorial is nonzero");
        let term = if parity % 2 == 1 { term.neg() } else { term };
        acc = acc.add(&term).expect("shared context");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{nat, BijectionKind};
    use crate::digits::Branch;
    use num::bigint::BigInt;
    use num::{One, Signed, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tol(bits: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << bits)
    }

    #[test]
    fn i_prime_squares_to_minus_one_prime() {
        for ctx in [
            ArithmeticContext::new(BijectionKind::Identity),
            ArithmeticContext::new(BijectionKind::TernaryLine(Branch::Minus)),
            ArithmeticContext::new(BijectionKind::Fechner { a: rat(2, 1), b: rat(1, 3) }),
        ] {
            let i = i_prime(&ctx);
            let sq = i.cmul(&i).unwrap();
            assert_eq!(sq.re, one_prime(&ctx).neg());
            assert!(sq.im.is_zero_prime());
        }
    }

    #[test]
    fn identity_complex_oracle() {
        let ctx = ArithmeticContext::new(BijectionKind::Identity);
        let a = NDComplex::new(nat(&ctx, 1), nat(&ctx, 2)).unwrap();
        let b = NDComplex::new(nat(&ctx, 3), nat(&ctx, 4)).unwrap();
        let p = a.cmul(&b).unwrap();
        assert_eq!(p.re.lower(), &rat(-5, 1));
        assert_eq!(p.im.lower(), &rat(10, 1));
        let m = NDComplex::new(nat(&ctx, 3), nat(&ctx, 4)).unwrap().modulus_sq();
        assert_eq!(m.lower(), &rat(25, 1));
    }

    #[test]
    fn conj_involution_and_modulus() {
        let ctx = ArithmeticContext::new(BijectionKind::TernaryLine(Branch::Minus));
        let a = NDComplex::new(
            NDNumber::from_lower(ctx.clone(), rat(3, 7)),
            NDNumber::from_lower(ctx.clone(), rat(-2, 5)),
        )
        .unwrap();
        assert_eq!(a.conj().conj(), a);
        assert_eq!(i_prime(&ctx).conj(), i_prime(&ctx).cmul(&NDComplex::from_real(one_prime(&ctx).neg())).unwrap());
        assert_eq!(NDComplex::from_real(one_prime(&ctx)).modulus_sq(), one_prime(&ctx));
    }

    #[test]
    fn trig_zero_values() {
        let ctx = ArithmeticContext::new(BijectionKind::TernaryLine(Branch::Minus));
        assert_eq!(nd_cos(&zero_prime(&ctx)), one_prime(&ctx));
        assert_eq!(nd_sin(&zero_prime(&ctx)), zero_prime(&ctx));
        let e = cexp_i(&zero_prime(&ctx));
        assert_eq!(e.re, one_prime(&ctx));
        assert_eq!(e.im, zero_prime(&ctx));
    }

    #[test]
    fn euler_at_pi() {
        let ctx = ArithmeticContext::new(BijectionKind::Identity);
        let pi = NDNumber::from_lower(ctx.clone(), dyadic::pi_dyadic(160));
        let e = cexp_i(&pi);
        assert!((e.re.lower() + BigRational::one()).abs() < tol(100));
        assert!(e.im.lower().abs() < tol(100));
    }

    #[test]
    fn trig_identity_across_contexts() {
        let ctx = ArithmeticContext::new(BijectionKind::TernaryLine(Branch::Minus));
        let phi = NDNumber::from_lower(ctx.clone(), rat(5, 3));
        let c = nd_cos(&phi);
        let s = nd_sin(&phi);
        let sum = c.pow_nat(2).add(&s.pow_nat(2)).unwrap();
        assert!((sum.lower() - BigRational::one()).abs() < tol(100));
        // Exp(i' phi) (.) Exp(-i' phi) = 1'
        let e = cexp_i(&phi);
        let p = e.cmul(&e.conj()).unwrap();
        assert!((p.re.lower() - BigRational::one()).abs() < tol(100));
        assert!(p.im.lower().is_zero() || p.im.lower().abs() < tol(100));
    }

    #[test]
    fn taylor_structure_and_convergence() {
        let ctx = ArithmeticContext::new(BijectionKind::TernaryLine(Branch::Minus));
        let x = NDNumber::from_lower(ctx.clone(), rat(1, 2));
        // leading Exp term
        assert_eq!(taylor_partial(TaylorKind::Exp, &zero_prime(&ctx), 1), one_prime(&ctx));
        // Cos with 2 terms is exactly 1' (-) X^2' (/) 2!'
        let direct = one_prime(&ctx)
            .sub(&x.pow_nat(2).div(&factorial_prime(&ctx, 2)).unwrap())
            .unwrap();
        assert_eq!(taylor_partial(TaylorKind::Cos, &x, 2), direct);
        // Sin partial sum converges to the closed form.
        let ctx_id = ArithmeticContext::new(BijectionKind::Identity);
        let one = one_prime(&ctx_id);
        let s20 = taylor_partial(TaylorKind::Sin, &one, 20);
        let diff = (s20.lower() - BigRational::from_float(1f64.sin()).unwrap()).abs();
        assert!(diff < rat(1, 1_000_000_000_000_000));
    }
}
