//! Arithmetic conjugated through a bijection f: X -> R.
//!
//! Values are stored by their lower coordinate f(X), an exact rational,
//! so the four operations are exact rational arithmetic regardless of
//! the bijection. The upper coordinate X = f^-1(lower) is materialized
//! lazily and cached.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::digits::{self, Branch};
use crate::dyadic;
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// The bijection defining one non-Diophantine arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BijectionKind {
    /// f(x) = x.
    Identity,
    /// f(x) = p x, p != 0.
    Benioff { p: BigRational },
    /// f(x) = a ln x + b on the positive half-line, a != 0.
    Fechner { a: BigRational, b: BigRational },
    /// Translated ternary Cantor line, one unit cell per integer.
    TernaryLine(Branch),
    /// Scaled/antisymmetric quaternary Cantor set.
    QuaternaryCantor(Branch),
    /// Self-similar middle-third Cantor set (base-3 analog of the
    /// quaternary construction; the terminating-form branch is used).
    MiddleThirdSelfSimilar,
}

impl fmt::Display for BijectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BijectionKind::Identity => write!(f, "identity"),
            BijectionKind::Benioff { p } => write!(f, "benioff:p={p}"),
            BijectionKind::Fechner { a, b } => write!(f, "fechner:a={a},b={b}"),
            BijectionKind::TernaryLine(br) => write!(f, "ternary-line:{br}"),
            BijectionKind::QuaternaryCantor(br) => write!(f, "quaternary:{br}"),
            BijectionKind::MiddleThirdSelfSimilar => write!(f, "middle-third"),
        }
    }
}

impl std::str::FromStr for BijectionKind {
    type Err = Error;

    /// Parses the same textual form Display emits, e.g. "identity",
    /// "benioff:p=2", "fechner:a=1,b=0", "ternary-line:minus",
    /// "quaternary:plus", "middle-third".
    fn from_str(s: &str) -> Result<Self> {
        fn branch(s: &str) -> Result<Branch> {
            match s {
                "minus" => Ok(Branch::Minus),
                "plus" => Ok(Branch::Plus),
                other => Err(Error::Parse(format!(
                    "unknown branch '{other}', expected 'minus' or 'plus'"
                ))),
            }
        }
        fn keyed(part: &str, key: &str) -> Result<BigRational> {
            let val = part.strip_prefix(key).and_then(|p| p.strip_prefix('='));
            match val {
                Some(v) => crate::rational::parse_rational(v),
                None => Err(Error::Parse(format!(
                    "expected '{key}=<rational>' in bijection spec, got '{part}'"
                ))),
            }
        }
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("identity", None) => Ok(BijectionKind::Identity),
            ("middle-third", None) => Ok(BijectionKind::MiddleThirdSelfSimilar),
            ("benioff", Some(r)) => {
                let p = keyed(r, "p")?;
                if p.is_zero() {
                    return Err(Error::Parse("benioff requires p != 0".into()));
                }
                Ok(BijectionKind::Benioff { p })
            }
            ("fechner", Some(r)) => {
                let (pa, pb) = r.split_once(',').ok_or_else(|| {
                    Error::Parse("fechner requires 'a=<rational>,b=<rational>'".into())
                })?;
                let a = keyed(pa, "a")?;
                if a.is_zero() {
                    return Err(Error::Parse("fechner requires a != 0".into()));
                }
                Ok(BijectionKind::Fechner {
                    a,
                    b: keyed(pb, "b")?,
                })
            }
            ("ternary-line", Some(r)) => Ok(BijectionKind::TernaryLine(branch(r)?)),
            ("quaternary", Some(r)) => Ok(BijectionKind::QuaternaryCantor(branch(r)?)),
            _ => Err(Error::Parse(format!("unknown bijection '{s}'"))),
        }
    }
}

/// A bijection plus the dyadic precision used whenever a transcendental
/// value has to be materialized. Contexts compare by value; numbers
/// from different contexts never mix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithmeticContext {
    pub kind: BijectionKind,
    pub precision_bits: u32,
}

impl ArithmeticContext {
    pub fn new(kind: BijectionKind) -> Arc<Self> {
        Self::with_precision(kind, DEFAULT_PRECISION_BITS)
    }

    pub fn with_precision(kind: BijectionKind, precision_bits: u32) -> Arc<Self> {
        if let BijectionKind::Benioff { p } = &kind {
            assert!(!p.is_zero(), "Benioff scale must be nonzero");
        }
        if let BijectionKind::Fechner { a, .. } = &kind {
            assert!(!a.is_zero(), "Fechner slope must be nonzero");
        }
        Arc::new(ArithmeticContext { kind, precision_bits })
    }

    /// f: upper coordinate to lower coordinate. Exact for every
    /// rational-valued bijection; dyadic at `precision_bits` for
    /// Fechner. Fails off the bijection's domain.
    pub fn forward(&self, upper: &BigRational) -> Result<BigRational> {
        match &self.kind {
            BijectionKind::Identity => Ok(upper.clone()),
            BijectionKind::Benioff { p } => Ok(upper * p),
            BijectionKind::Fechner { a, b } => {
                if !upper.is_positive() {
                    return Err(Error::Domain(format!(
                        "Fechner domain is the positive half-line, got {upper}"
                    )));
                }
                Ok(dyadic::ln_dyadic(upper, self.precision_bits) * a + b)
            }
            BijectionKind::TernaryLine(br) => digits::ternary_line_forward(upper, *br),
            BijectionKind::QuaternaryCantor(br) => digits::quaternary_forward(upper, *br),
            BijectionKind::MiddleThirdSelfSimilar => {
                digits::middle_third_forward(upper, Branch::Plus)
            }
        }
    }

    /// f^-1 = g: lower coordinate to upper coordinate. Total on the
    /// rationals; dyadic at `precision_bits` for Fechner.
    pub fn inverse(&self, lower: &BigRational) -> BigRational {
        match &self.kind {
            BijectionKind::Identity => lower.clone(),
            BijectionKind::Benioff { p } => lower / p,
            BijectionKind::Fechner { a, b } => {
                let arg = (lower - b) / a;
                dyadic::exp_dyadic(&arg, self.precision_bits)
            }
            BijectionKind::TernaryLine(br) => digits::ternary_line_inverse(lower, *br),
            BijectionKind::QuaternaryCantor(br) => digits::quaternary_inverse(lower, *br),
            BijectionKind::MiddleThirdSelfSimilar => {
                digits::middle_third_inverse(lower, Branch::Plus)
            }
        }
    }

    /// The inverse is exact (rational for rational input) for every
    /// kind except Fechner.
    pub fn inverse_is_exact(&self) -> bool {
        !matches!(self.kind, BijectionKind::Fechner { .. })
    }
}

/// An element of X, canonically stored by its lower coordinate.
#[derive(Debug, Clone)]
pub struct NDNumber {
    ctx: Arc<ArithmeticContext>,
    lower: BigRational,
    upper_cache: OnceLock<BigRational>,
}

impl PartialEq for NDNumber {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.lower == other.lower
    }
}
impl Eq for NDNumber {}

impl fmt::Display for NDNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lower)
    }
}

impl NDNumber {
    pub fn from_lower(ctx: Arc<ArithmeticContext>, lower: BigRational) -> Self {
        NDNumber {
            ctx,
            lower,
            upper_cache: OnceLock::new(),
        }
    }

    /// Construct from the upper coordinate; fails when the value is not
    /// in the bijection's domain (e.g. not a Cantor-set point).
    pub fn from_upper(ctx: Arc<ArithmeticContext>, upper: BigRational) -> Result<Self> {
        let lower = ctx.forward(&upper)?;
        let n = NDNumber::from_lower(ctx, lower);
        let _ = n.upper_cache.set(upper);
        Ok(n)
    }

    pub fn context(&self) -> &Arc<ArithmeticContext> {
        &self.ctx
    }

    pub fn lower(&self) -> &BigRational {
        &self.lower
    }

    /// The element X itself, materialized via f^-1 on first use.
    pub fn upper(&self) -> &BigRational {
        self.upper_cache.get_or_init(|| self.ctx.inverse(&self.lower))
    }

    fn check_ctx(&self, other: &NDNumber) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &NDNumber) -> Result<NDNumber> {
        self.check_ctx(other)?;
        Ok(NDNumber::from_lower(self.ctx.clone(), &self.lower + &other.lower))
    }

    pub fn sub(&self, other: &NDNumber) -> Result<NDNumber> {
        self.check_ctx(other)?;
        Ok(NDNumber::from_lower(self.ctx.clone(), &self.lower - &other.lower))
    }

    pub fn mul(&self, other: &NDNumber) -> Result<NDNumber> {
        self.check_ctx(other)?;
        Ok(NDNumber::from_lower(self.ctx.clone(), &self.lower * &other.lower))
    }

    pub fn div(&self, other: &NDNumber) -> Result<NDNumber> {
        self.check_ctx(other)?;
        if other.lower.is_zero() {
            return Err(Error::DivisionByZeroPrime);
        }
        Ok(NDNumber::from_lower(self.ctx.clone(), &self.lower / &other.lower))
    }

    pub fn neg(&self) -> NDNumber {
        NDNumber::from_lower(self.ctx.clone(), -self.lower.clone())
    }

    /// x^(n') with natural n: lower coordinate f(x)^n.
    pub fn pow_nat(&self, n: u32) -> NDNumber {
        let lower = if n == 0 {
            BigRational::one()
        } else {
            num::pow::pow(self.lower.clone(), n as usize)
        };
        NDNumber::from_lower(self.ctx.clone(), lower)
    }

    pub fn is_zero_prime(&self) -> bool {
        self.lower.is_zero()
    }
}

pub fn zero_prime(ctx: &Arc<ArithmeticContext>) -> NDNumber {
    NDNumber::from_lower(ctx.clone(), BigRational::zero())
}

pub fn one_prime(ctx: &Arc<ArithmeticContext>) -> NDNumber {
    NDNumber::from_lower(ctx.clone(), BigRational::one())
}

/// n' = f^-1(n).
pub fn nat(ctx: &Arc<ArithmeticContext>, n: i64) -> NDNumber {
    NDNumber::from_lower(ctx.clone(), BigRational::from_integer(BigInt::from(n)))
}

/// n!' = f^-1(n!).
pub fn factorial_prime(ctx: &Arc<ArithmeticContext>, n: u32) -> NDNumber {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= BigInt::from(k);
    }
    NDNumber::from_lower(ctx.clone(), BigRational::from_integer(acc))
}
