//! Derivatives, integrals and the Laplacian of conjugated functions
//! A = f^-1 . a . f.
//!
//! All differentiation happens on the lowercase function a, in exact
//! rational arithmetic over dyadic evaluations, so the conjugation
//! formulas hold by construction. Integration runs in f64 through
//! composite Gauss-Legendre; the acceptance tolerances of everything
//! built on it are far above f64 noise.

use std::sync::Arc;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::arithmetic::{ArithmeticContext, NDNumber};
use crate::dyadic;
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};
use crate::rational::{from_f64, to_f64};

/// Lowercase evaluation at a rational point, accurate to `2^-prec`.
pub type RatFn = dyn Fn(&BigRational, u32) -> BigRational + Send + Sync;
/// Fast float path used by quadrature and figure sampling.
pub type F64Fn = dyn Fn(f64) -> f64 + Send + Sync;

/// A function A: X -> X represented by its lowercase conjugate a, so
/// that A(X) = f^-1(a(f(X))) holds by construction.
#[derive(Clone)]
pub struct NDFunction {
    ctx: Arc<ArithmeticContext>,
    description: String,
    lower_rat: Arc<RatFn>,
    lower_f64: Arc<F64Fn>,
    deriv_rat: Option<Arc<RatFn>>,
    deriv_f64: Option<Arc<F64Fn>>,
    breakpoints: Vec<BigRational>,
}

impl std::fmt::Debug for NDFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NDFunction")
            .field("description", &self.description)
            .field("has_closed_derivative", &self.deriv_rat.is_some())
            .finish()
    }
}

impl NDFunction {
    pub fn from_lower(
        ctx: Arc<ArithmeticContext>,
        description: impl Into<String>,
        lower_rat: Arc<RatFn>,
        lower_f64: Arc<F64Fn>,
    ) -> Self {
        NDFunction {
            ctx,
            description: description.into(),
            lower_rat,
            lower_f64,
            deriv_rat: None,
            deriv_f64: None,
            breakpoints: Vec::new(),
        }
    }

    /// Register a closed-form lowercase derivative.
    pub fn with_derivative(mut self, rat: Arc<RatFn>, f64fn: Arc<F64Fn>) -> Self {
        self.deriv_rat = Some(rat);
        self.deriv_f64 = Some(f64fn);
        self
    }

    /// Declare jump locations for quadrature splitting.
    pub fn with_breakpoints(mut self, pts: Vec<BigRational>) -> Self {
        self.breakpoints = pts;
        self
    }

    pub fn context(&self) -> &Arc<ArithmeticContext> {
        &self.ctx
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn eval_lower(&self, x: &BigRational, prec: u32) -> BigRational {
        (self.lower_rat)(x, prec)
    }

    pub fn eval_lower_f64(&self, x: f64) -> f64 {
        (self.lower_f64)(x)
    }

    pub fn lower_closure_f64(&self) -> Arc<F64Fn> {
        self.lower_f64.clone()
    }

    /// A(X) as an element of X.
    pub fn eval(&self, x: &NDNumber) -> Result<NDNumber> {
        if x.context() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let lower = self.eval_lower(x.lower(), self.ctx.precision_bits);
        Ok(NDNumber::from_lower(self.ctx.clone(), lower))
    }

    // ---- constructors for the standard lowercase functions ----

    pub fn constant(ctx: Arc<ArithmeticContext>, c: BigRational) -> Self {
        let cf = to_f64(&c);
        let c2 = c.clone();
        NDFunction::from_lower(
            ctx,
            format!("const {c}"),
            Arc::new(move |_, _| c2.clone()),
            Arc::new(move |_| cf),
        )
        .with_derivative(
            Arc::new(|_, _| BigRational::zero()),
            Arc::new(|_| 0.0),
        )
    }

    /// a(x) = x^n.
    pub fn monomial(ctx: Arc<ArithmeticContext>, n: u32) -> Self {
        NDFunction::from_lower(
            ctx,
            format!("x^{n}"),
            Arc::new(move |x, _| num::pow::pow(x.clone(), n as usize)),
            Arc::new(move |x| x.powi(n as i32)),
        )
        .with_derivative(
            Arc::new(move |x, _| {
                if n == 0 {
                    BigRational::zero()
                } else {
                    num::pow::pow(x.clone(), (n - 1) as usize)
                        * BigRational::from_integer(BigInt::from(n))
                }
            }),
            Arc::new(move |x| {
                if n == 0 {
                    0.0
                } else {
                    n as f64 * x.powi(n as i32 - 1)
                }
            }),
        )
    }

    /// a(x) = sin(k x).
    pub fn sin_scaled(ctx: Arc<ArithmeticContext>, k: BigRational) -> Self {
        let kf = to_f64(&k);
        let k1 = k.clone();
        let k2 = k.clone();
        NDFunction::from_lower(
            ctx,
            format!("sin({k} x)"),
            Arc::new(move |x, prec| dyadic::sin_dyadic(&(x * &k1), prec)),
            Arc::new(move |x| (kf * x).sin()),
        )
        .with_derivative(
            Arc::new(move |x, prec| dyadic::cos_dyadic(&(x * &k2), prec + 8) * &k2),
            Arc::new(move |x| kf * (kf * x).cos()),
        )
    }

    /// a(x) = cos(k x).
    pub fn cos_scaled(ctx: Arc<ArithmeticContext>, k: BigRational) -> Self {
        let kf = to_f64(&k);
        let k1 = k.clone();
        let k2 = k.clone();
        NDFunction::from_lower(
            ctx,
            format!("cos({k} x)"),
            Arc::new(move |x, prec| dyadic::cos_dyadic(&(x * &k1), prec)),
            Arc::new(move |x| (kf * x).cos()),
        )
        .with_derivative(
            Arc::new(move |x, prec| -(dyadic::sin_dyadic(&(x * &k2), prec + 8) * &k2)),
            Arc::new(move |x| -kf * (kf * x).sin()),
        )
    }

    /// a(x) = exp(k x).
    pub fn exp_scaled(ctx: Arc<ArithmeticContext>, k: BigRational) -> Self {
        let kf = to_f64(&k);
        let k1 = k.clone();
        let k2 = k.clone();
        NDFunction::from_lower(
            ctx,
            format!("exp({k} x)"),
            Arc::new(move |x, prec| dyadic::exp_dyadic(&(x * &k1), prec)),
            Arc::new(move |x| (kf * x).exp()),
        )
        .with_derivative(
            Arc::new(move |x, prec| dyadic::exp_dyadic(&(x * &k2), prec + 8) * &k2),
            Arc::new(move |x| kf * (kf * x).exp()),
        )
    }
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Central-difference derivative with Richardson extrapolation, exact
/// rational tableau over dyadic evaluations.
fn central_richardson(f: &RatFn, x0: &BigRational, prec: u32) -> Result<BigRational> {
    const LEVELS: usize = 6;
    const K0: u32 = 10;
    let wp = prec + 48 + K0 + LEVELS as u32;
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(LEVELS);
    for j in 0..LEVELS {
        let k = K0 + j as u32;
        let h = pow2_inv(k);
        let two_h = BigRational::new(BigInt::one(), BigInt::one() << (k - 1));
        let d = (f(&(x0 + &h), wp) - f(&(x0 - &h), wp)) / two_h;
        let mut row = vec![d];
        for m in 1..=j {
            let factor = BigRational::from_integer(BigInt::one() << (2 * m));
            let prev = &tableau[j - 1][m - 1];
            let cur = &row[m - 1];
            let extrap = (&factor * cur - prev) / (factor - BigRational::one());
            row.push(extrap);
        }
        tableau.push(row);
    }
    let last = &tableau[LEVELS - 1][LEVELS - 1];
    let prev = &tableau[LEVELS - 2][LEVELS - 2];
    let residual = (last - prev).abs();
    if residual > pow2_inv(prec / 2 + 4) {
        return Err(Error::NonDifferentiable {
            residual: to_f64(&residual),
        });
    }
    Ok(last.clone())
}

/// DA(X)/DX = f^-1(a'(f(X))): the registered closed-form derivative
/// when available, otherwise Richardson-extrapolated central
/// differences at the context's precision.
pub fn derivative(a: &NDFunction, x: &NDNumber) -> Result<NDNumber> {
    if x.context() != a.context() {
        return Err(Error::ContextMismatch);
    }
    let prec = a.context().precision_bits;
    let lower = match &a.deriv_rat {
        Some(d) => d(x.lower(), prec),
        None => central_richardson(a.lower_rat.as_ref(), x.lower(), prec)?,
    };
    Ok(NDNumber::from_lower(a.context().clone(), lower))
}

/// The limit definition: difference quotients along f(H_k) = 2^-k,
/// Richardson-extrapolated (the one-sided error expansion is a power
/// series in h, so a ratio-2 Neville tableau applies).
pub fn derivative_by_limit(a: &NDFunction, x: &NDNumber, steps: usize) -> Result<NDNumber> {
    if x.context() != a.context() {
        return Err(Error::ContextMismatch);
    }
    let steps = steps.max(3);
    let prec = a.context().precision_bits;
    const K0: u32 = 8;
    let wp = prec + 48 + K0 + steps as u32;
    let x0 = x.lower();
    let fx0 = a.eval_lower(x0, wp);
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(steps);
    for j in 0..steps {
        let k = K0 + j as u32;
        let h = pow2_inv(k);
        let d = (a.eval_lower(&(x0 + &h), wp) - &fx0) / &h;
        let mut row = vec![d];
        for m in 1..=j {
            let factor = BigRational::from_integer(BigInt::one() << m);
            let prev = &tableau[j - 1][m - 1];
            let cur = &row[m - 1];
            let extrap = (&factor * cur - prev) / (factor - BigRational::one());
            row.push(extrap);
        }
        tableau.push(row);
    }
    let last = &tableau[steps - 1][steps - 1];
    let prev = &tableau[steps - 2][steps - 2];
    let residual = (last - prev).abs();
    if residual > pow2_inv(prec / 2 + 4) {
        return Err(Error::NonConvergent {
            last_correction: to_f64(&residual),
        });
    }
    Ok(NDNumber::from_lower(a.context().clone(), last.clone()))
}

/// Definite integral between X and Y: f^-1 of the lowercase integral
/// over [f(X), f(Y)], split at the function's declared breakpoints.
pub fn integral(
    a: &NDFunction,
    x: &NDNumber,
    y: &NDNumber,
    spec: &QuadratureSpec,
) -> Result<NDNumber> {
    if x.context() != a.context() || y.context() != a.context() {
        return Err(Error::ContextMismatch);
    }
    let lo = to_f64(x.lower());
    let hi = to_f64(y.lower());
    let cuts: Vec<f64> = a.breakpoints.iter().map(to_f64).collect();
    let f = a.lower_f64.clone();
    let v = quadrature::integrate(&move |t| f(t), lo, hi, &cuts, spec)?;
    Ok(NDNumber::from_lower(a.context().clone(), from_f64(v)))
}

/// Laplacian D/DX D/DX via Richardson-extrapolated second central
/// differences on the lowercase function.
pub fn laplacian(a: &NDFunction, x: &NDNumber) -> Result<NDNumber> {
    if x.context() != a.context() {
        return Err(Error::ContextMismatch);
    }
    let prec = a.context().precision_bits;
    const LEVELS: usize = 5;
    const K0: u32 = 8;
    let wp = prec + 48 + 2 * (K0 + LEVELS as u32);
    let x0 = x.lower();
    let two = BigRational::from_integer(BigInt::from(2));
    let fx0 = a.eval_lower(x0, wp);
    let mut tableau: Vec<Vec<BigRational>> = Vec::with_capacity(LEVELS);
    for j in 0..LEVELS {
        let k = K0 + j as u32;
        let h = pow2_inv(k);
        let h2 = pow2_inv(2 * k);
        let d = (a.eval_lower(&(x0 + &h), wp) - &two * &fx0 + a.eval_lower(&(x0 - &h), wp)) / h2;
        let mut row = vec![d];
        for m in 1..=j {
            let factor = BigRational::from_integer(BigInt::one() << (2 * m));
            let prev = &tableau[j - 1][m - 1];
            let cur = &row[m - 1];
            let extrap = (&factor * cur - prev) / (factor - BigRational::one());
            row.push(extrap);
        }
        tableau.push(row);
    }
    let last = &tableau[LEVELS - 1][LEVELS - 1];
    let prev = &tableau[LEVELS - 2][LEVELS - 2];
    let residual = (last - prev).abs();
    if residual > pow2_inv(prec / 4) {
        return Err(Error::NonDifferentiable {
            residual: to_f64(&residual),
        });
    }
    Ok(NDNumber::from_lower(a.context().clone(), last.clone()))
}
