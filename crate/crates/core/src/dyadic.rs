//! Dyadic approximation of elementary transcendental functions.
//!
//! Every function takes an exact rational argument and returns a dyadic
//! rational within `2^-prec` of the true value. Internally everything
//! runs in big-integer fixed point with 64 guard bits, so the only
//! rounding the rest of the library ever sees is the documented final
//! one.

use std::sync::Mutex;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{BigRational, One, Signed, Zero};

const GUARD: u32 = 64;

fn shl(v: &BigInt, s: u32) -> BigInt {
    v << s
}

/// Round-to-nearest division.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let two_a = a << 1u32;
    (two_a + b).div_floor(&(b << 1u32))
}

fn rat_to_fx(r: &BigRational, scale: u32) -> BigInt {
    div_round(&shl(r.numer(), scale), r.denom())
}

fn fx_to_rat(v: BigInt, scale: u32) -> BigRational {
    BigRational::new(v, BigInt::one() << scale)
}

fn mul_fx(a: &BigInt, b: &BigInt, scale: u32) -> BigInt {
    let p = a * b;
    let half = BigInt::one() << (scale - 1);
    (p + half) >> scale
}

fn div_fx(a: &BigInt, b: &BigInt, scale: u32) -> BigInt {
    if b.is_negative() {
        div_round(&-shl(a, scale), &-b)
    } else {
        div_round(&shl(a, scale), b)
    }
}

/// Number of bits in the integer part of |r|, at least 0.
fn int_bits(r: &BigRational) -> u32 {
    let f = r.abs().floor().to_integer();
    f.bits() as u32
}

/// arctan(1/p) in fixed point (Gregory series, exact integer steps).
fn atan_inv_fx(p: u64, scale: u32) -> BigInt {
    let p2 = BigInt::from(p) * BigInt::from(p);
    let mut term = div_round(&(BigInt::one() << scale), &BigInt::from(p));
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        let denom = BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            acc += div_round(&term, &denom);
        } else {
            acc -= div_round(&term, &denom);
        }
        term = div_round(&term, &p2);
        k += 1;
    }
    acc
}

static PI_CACHE: Mutex<Option<(u32, BigInt)>> = Mutex::new(None);
static LN2_CACHE: Mutex<Option<(u32, BigInt)>> = Mutex::new(None);

fn pi_fx(scale: u32) -> BigInt {
    let mut cache = PI_CACHE.lock().unwrap();
    if let Some((s, v)) = cache.as_ref() {
        if *s >= scale {
            return v >> (*s - scale);
        }
    }
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
    let s = scale + 8;
    let v: BigInt = atan_inv_fx(5, s) * 16 - atan_inv_fx(239, s) * 4;
    *cache = Some((s, v.clone()));
    v >> 8
}

fn ln2_fx(scale: u32) -> BigInt {
    let mut cache = LN2_CACHE.lock().unwrap();
    if let Some((s, v)) = cache.as_ref() {
        if *s >= scale {
            return v >> (*s - scale);
        }
    }
    // ln 2 = 2 atanh(1/3) = 2 sum 1/((2k+1) 3^(2k+1)).
    let s = scale + 8;
    let mut term = div_round(&(BigInt::one() << s), &BigInt::from(3));
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        acc += div_round(&term, &BigInt::from(2 * k + 1));
        term = div_round(&term, &BigInt::from(9));
        k += 1;
    }
    let v: BigInt = acc * 2;
    *cache = Some((s, v.clone()));
    v >> 8
}

/// pi as a dyadic rational within `2^-prec`.
pub fn pi_dyadic(prec: u32) -> BigRational {
    let s = prec + GUARD;
    fx_to_rat(pi_fx(s), s)
}

/// Square root of a nonnegative rational within `2^-prec`.
pub fn sqrt_dyadic(x: &BigRational, prec: u32) -> BigRational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    let s = prec + GUARD;
    // floor-sqrt of x * 2^(2s), then scale back by 2^s.
    let scaled = div_round(&shl(x.numer(), 2 * s), x.denom());
    let root = num::integer::Roots::sqrt(&scaled);
    fx_to_rat(root, s)
}

/// exp(x) within relative error `2^-prec` (absolute `2^-prec` for x <= 0).
pub fn exp_dyadic(x: &BigRational, prec: u32) -> BigRational {
    if x.is_negative() {
        let inv = exp_dyadic(&-x.clone(), prec + GUARD / 2);
        let s = prec + GUARD;
        let v = div_fx(&(BigInt::one() << s), &rat_to_fx(&inv, s), s);
        return fx_to_rat(v, s);
    }
    // Halve the argument m times so the Taylor series converges fast,
    // then square m times. Each squaring loses about one bit.
    let m = int_bits(x) + 2;
    let s = prec + GUARD + 2 * m;
    let small = x / BigRational::from_integer(BigInt::one() << m);
    let small_fx = rat_to_fx(&small, s);
    let mut term = BigInt::one() << s;
    let mut acc = term.clone();
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = div_round(&mul_fx(&term, &small_fx, s), &BigInt::from(k));
        acc += &term;
        k += 1;
    }
    for _ in 0..m {
        acc = mul_fx(&acc, &acc, s);
    }
    fx_to_rat(acc, s)
}

/// ln(x) for x > 0 within `2^-prec`.
pub fn ln_dyadic(x: &BigRational, prec: u32) -> BigRational {
    assert!(x.is_positive(), "ln of non-positive rational");
    let s = prec + GUARD;
    // Normalize x = u * 2^e with u in [1, 2).
    let mut e: i64 = 0;
    let mut u = x.clone();
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    while u >= two {
        u /= &two;
        e += 1;
    }
    while u < one {
        u *= &two;
        e -= 1;
    }
    // ln u = 2 atanh((u-1)/(u+1)), |z| < 1/3.
    let z = (&u - &one) / (&u + &one);
    let z_fx = rat_to_fx(&z, s);
    let z2 = mul_fx(&z_fx, &z_fx, s);
    let mut term = z_fx;
    let mut acc = BigInt::zero();
    let mut k: u64 = 0;
    while !term.is_zero() {
        acc += div_round(&term, &BigInt::from(2 * k + 1));
        term = mul_fx(&term, &z2, s);
        k += 1;
    }
    let ln_u = acc * 2;
    let v = ln_u + ln2_fx(s) * BigInt::from(e);
    fx_to_rat(v, s)
}

/// Shared Taylor evaluation of cos/sin at a fixed-point argument with
/// |rho| <= pi + 1.
fn cos_sin_taylor(rho: &BigInt, scale: u32) -> (BigInt, BigInt) {
    let rho2 = mul_fx(rho, rho, scale);
    // cos
    let mut term = BigInt::one() << scale;
    let mut cos_acc = term.clone();
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = -div_round(
            &mul_fx(&term, &rho2, scale),
            &BigInt::from((2 * k - 1) * (2 * k)),
        );
        cos_acc += &term;
        k += 1;
    }
    // sin
    let mut term = rho.clone();
    let mut sin_acc = term.clone();
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = -div_round(
            &mul_fx(&term, &rho2, scale),
            &BigInt::from((2 * k) * (2 * k + 1)),
        );
        sin_acc += &term;
        k += 1;
    }
    (cos_acc, sin_acc)
}

/// (cos x, sin x) of a rational argument within `2^-prec`.
pub fn cos_sin_dyadic(x: &BigRational, prec: u32) -> (BigRational, BigRational) {
    // Reduction modulo 2*pi costs as many bits as the argument has.
    let s = prec + GUARD + int_bits(x) + 8;
    let two_pi = pi_fx(s) << 1u32;
    let x_fx = rat_to_fx(x, s);
    let k = div_round(&x_fx, &two_pi);
    let rho = x_fx - k * &two_pi;
    let (c, v) = cos_sin_taylor(&rho, s);
    (fx_to_rat(c, s), fx_to_rat(v, s))
}

pub fn cos_dyadic(x: &BigRational, prec: u32) -> BigRational {
    cos_sin_dyadic(x, prec).0
}

pub fn sin_dyadic(x: &BigRational, prec: u32) -> BigRational {
    cos_sin_dyadic(x, prec).1
}

/// (cos(pi r), sin(pi r)) with the periodic reduction done exactly on
/// the rational r, so the accuracy is independent of |r|.
pub fn cos_sin_pi_dyadic(r: &BigRational, prec: u32) -> (BigRational, BigRational) {
    let two = BigRational::from_integer(BigInt::from(2));
    // Reduce r into (-1, 1].
    let mut r2 = r - (r / &two).floor() * &two;
    if r2 > BigRational::one() {
        r2 -= &two;
    }
    let s = prec + GUARD + 8;
    let rho = mul_fx(&rat_to_fx(&r2, s), &pi_fx(s), s);
    let (c, v) = cos_sin_taylor(&rho, s);
    (fx_to_rat(c, s), fx_to_rat(v, s))
}

pub fn cos_pi_dyadic(r: &BigRational, prec: u32) -> BigRational {
    cos_sin_pi_dyadic(r, prec).0
}

pub fn sin_pi_dyadic(r: &BigRational, prec: u32) -> BigRational {
    cos_sin_pi_dyadic(r, prec).1
}
