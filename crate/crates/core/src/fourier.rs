//! Scalar product, trigonometric basis, Fourier analysis/synthesis and
//! the frequency spectrum of the conjugated Laplacian.
//!
//! Coefficients live in lower coordinates. The basis on the lowercase
//! side is c_0 = sqrt(1/f(T)), c_n = sqrt(2/f(T)) cos(2 n pi y / f(T)),
//! s_n likewise with sine; the uppercase basis is its conjugate.

use std::sync::Arc;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::arithmetic::{ArithmeticContext, BijectionKind, NDNumber};
use crate::calculus::NDFunction;
use crate::complex::NDComplex;
use crate::digits::{double_digits_unchecked, Branch};
use crate::dyadic;
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};
use crate::rational::{from_f64, to_f64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Cos,
    Sin,
}

/// Index into the trigonometric basis; `Sin` starts at n = 1 (s_0 is
/// identically zero and excluded).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    pub kind: BasisKind,
    pub n: u32,
}

impl BasisIndex {
    pub fn cos(n: u32) -> Self {
        BasisIndex { kind: BasisKind::Cos, n }
    }

    pub fn sin(n: u32) -> Self {
        assert!(n >= 1, "s_0 is identically zero and not a basis element");
        BasisIndex { kind: BasisKind::Sin, n }
    }
}

/// The conjugated basis function C_n or S_n for period f(T) = `f_t`.
pub fn basis_fn(idx: BasisIndex, f_t: &BigRational, ctx: &Arc<ArithmeticContext>) -> NDFunction {
    assert!(f_t.is_positive(), "period must be positive");
    let n = idx.n;
    let f_t = f_t.clone();
    let _ft_f64 = to_f64(&f_t);
    // amplitude^2 is rational: 1/f(T) for c_0, 2/f(T) otherwise.
    let amp_sq = if n == 0 && idx.kind == BasisKind::Cos {
        BigRational::one() / &f_t
    } else {
        BigRational::from_integer(BigInt::from(2)) / &f_t
    };
    let amp_f64 = to_f64(&amp_sq).sqrt();
    // argument as a multiple of pi: 2 n x / f(T), reduced exactly.
    let freq = BigRational::from_integer(BigInt::from(2 * n as i64)) / &f_t;
    let freq_f64 = std::f64::consts::PI * to_f64(&freq);
    let kind = idx.kind;

    let amp1 = amp_sq.clone();
    let fr1 = freq.clone();
    let rat = move |x: &BigRational, prec: u32| -> BigRational {
        let amp = dyadic::sqrt_dyadic(&amp1, prec + 8);
        let osc = match kind {
            BasisKind::Cos => dyadic::cos_pi_dyadic(&(x * &fr1), prec + 8),
            BasisKind::Sin => dyadic::sin_pi_dyadic(&(x * &fr1), prec + 8),
        };
        amp * osc
    };
    let f64fn = move |x: f64| -> f64 {
        match kind {
            BasisKind::Cos => amp_f64 * (freq_f64 * x).cos(),
            BasisKind::Sin => amp_f64 * (freq_f64 * x).sin(),
        }
    };

    let amp2 = amp_sq.clone();
    let fr2 = freq.clone();
    let drat = move |x: &BigRational, prec: u32| -> BigRational {
        // d/dx amp trig(pi freq x) = +/- amp pi freq cotrig(pi freq x)
        let amp = dyadic::sqrt_dyadic(&amp2, prec + 10);
        let pi = dyadic::pi_dyadic(prec + 10);
        let scale = amp * pi * &fr2;
        match kind {
            BasisKind::Cos => -(dyadic::sin_pi_dyadic(&(x * &fr2), prec + 10) * scale),
            BasisKind::Sin => dyadic::cos_pi_dyadic(&(x * &fr2), prec + 10) * scale,
        }
    };
    let df64 = move |x: f64| -> f64 {
        match kind {
            BasisKind::Cos => -amp_f64 * freq_f64 * (freq_f64 * x).sin(),
            BasisKind::Sin => amp_f64 * freq_f64 * (freq_f64 * x).cos(),
        }
    };

    let name = match kind {
        BasisKind::Cos => format!("C_{n}"),
        BasisKind::Sin => format!("S_{n}"),
    };
    NDFunction::from_lower(ctx.clone(), name, Arc::new(rat), Arc::new(f64fn))
        .with_derivative(Arc::new(drat), Arc::new(df64))
}

/// A complex-valued conjugated function as a pair of real ones.
#[derive(Debug, Clone)]
pub struct ComplexNDFunction {
    pub re: NDFunction,
    pub im: Option<NDFunction>,
}

impl From<NDFunction> for ComplexNDFunction {
    fn from(re: NDFunction) -> Self {
        ComplexNDFunction { re, im: None }
    }
}

impl ComplexNDFunction {
    fn breakpoints_f64(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.re.breakpoints().iter().map(to_f64).collect();
        if let Some(im) = &self.im {
            pts.extend(im.breakpoints().iter().map(to_f64));
        }
        pts
    }
}

/// <A|B> over the symmetric period window in lower coordinates,
/// computed as f^-1(Re <a|b>) (+) i' f^-1(Im <a|b>).
pub fn scalar_product(
    a: &ComplexNDFunction,
    b: &ComplexNDFunction,
    f_t: &BigRational,
    spec: &QuadratureSpec,
) -> Result<NDComplex> {
    let ctx = a.re.context().clone();
    if b.re.context() != &ctx {
        return Err(Error::ContextMismatch);
    }
    let half = to_f64(f_t) / 2.0;
    let mut cuts = a.breakpoints_f64();
    cuts.extend(b.breakpoints_f64());

    let ar = a.re.lower_closure_f64();
    let ai = a.im.as_ref().map(|f| f.lower_closure_f64());
    let br = b.re.lower_closure_f64();
    let bi = b.im.as_ref().map(|f| f.lower_closure_f64());

    // conj(a) * b = (ar br + ai bi) + i (ar bi - ai br)
    let ar2 = ar.clone();
    let ai2 = ai.clone();
    let br2 = br.clone();
    let bi2 = bi.clone();
    let re_ig = move |x: f64| {
        let mut v = ar2(x) * br2(x);
        if let (Some(ai), Some(bi)) = (&ai2, &bi2) {
            v += ai(x) * bi(x);
        }
        v
    };
    let im_ig = move |x: f64| {
        let mut v = 0.0;
        if let Some(bi) = &bi {
            v += ar(x) * bi(x);
        }
        if let Some(ai) = &ai {
            v -= ai(x) * br(x);
        }
        v
    };
    let re = quadrature::integrate(&re_ig, -half, half, &cuts, spec)?;
    let im = quadrature::integrate(&im_ig, -half, half, &cuts, spec)?;
    Ok(NDComplex {
        re: NDNumber::from_lower(ctx.clone(), from_f64(re)),
        im: NDNumber::from_lower(ctx, from_f64(im)),
    })
}

/// Period parameter and coefficient sequences of a Fourier expansion.
/// `cos[n]` holds <C_n|A> for n = 0..=n_max, `sin[n-1]` holds <S_n|A>.
#[derive(Debug, Clone)]
pub struct FourierSeries {
    pub context: Arc<ArithmeticContext>,
    pub f_t: BigRational,
    pub cos: Vec<NDNumber>,
    pub sin: Vec<NDNumber>,
}

impl FourierSeries {
    pub fn n_max(&self) -> usize {
        self.cos.len().saturating_sub(1)
    }

    /// JSON document for the series. Lower coordinates are exact
    /// rational strings; upper coordinates are decimal renderings at
    /// `display_digits` places (recomputable, included for readability).
    pub fn to_json(&self, display_digits: usize) -> serde_json::Value {
        let coeffs = |v: &[NDNumber]| -> serde_json::Value {
            v.iter()
                .map(|c| {
                    serde_json::json!({
                        "lower": c.lower().to_string(),
                        "upper": crate::rational::to_decimal_string(c.upper(), display_digits),
                    })
                })
                .collect()
        };
        serde_json::json!({
            "schema_version": 1,
            "context": {
                "bijection": self.context.kind.to_string(),
                "precision_bits": self.context.precision_bits,
            },
            "f_T": self.f_t.to_string(),
            "display_digits": display_digits,
            "cos": coeffs(&self.cos),
            "sin": coeffs(&self.sin),
        })
    }

    /// Rebuilds a series from the document produced by `to_json`.
    /// Only the exact lower coordinates are read back.
    pub fn from_json(doc: &serde_json::Value) -> Result<FourierSeries> {
        let bad = |what: &str| Error::Parse(format!("coefficient file: missing/invalid {what}"));
        if doc.get("schema_version").and_then(|v| v.as_u64()) != Some(1) {
            return Err(bad("schema_version (expected 1)"));
        }
        let ctx_doc = doc.get("context").ok_or_else(|| bad("context"))?;
        let kind: BijectionKind = ctx_doc
            .get("bijection")
            .and_then(|v| v.as_str())
            .ok_or_else(|| bad("context.bijection"))?
            .parse()?;
        let prec = ctx_doc
            .get("precision_bits")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| bad("context.precision_bits"))? as u32;
        let ctx = ArithmeticContext::with_precision(kind, prec);
        let f_t = crate::rational::parse_rational(
            doc.get("f_T")
                .and_then(|v| v.as_str())
                .ok_or_else(|| bad("f_T"))?,
        )?;
        let coeffs = |key: &str| -> Result<Vec<NDNumber>> {
            doc.get(key)
                .and_then(|v| v.as_array())
                .ok_or_else(|| bad(key))?
                .iter()
                .map(|entry| {
                    let s = entry
                        .get("lower")
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| bad(&format!("{key}[].lower")))?;
                    Ok(NDNumber::from_lower(
                        ctx.clone(),
                        crate::rational::parse_rational(s)?,
                    ))
                })
                .collect()
        };
        let cos = coeffs("cos")?;
        let sin = coeffs("sin")?;
        if cos.len() != sin.len() + 1 {
            return Err(bad("coefficient counts (need len(cos) = len(sin) + 1)"));
        }
        Ok(FourierSeries {
            context: ctx,
            f_t,
            cos,
            sin,
        })
    }

    pub fn cos_coeff(&self, n: usize) -> &NDNumber {
        &self.cos[n]
    }

    pub fn sin_coeff(&self, n: usize) -> &NDNumber {
        assert!(n >= 1);
        &self.sin[n - 1]
    }
}

/// Compute <C_n|A> and <S_n|A> for n <= n_max by lowercase quadrature.
pub fn analyze(
    a: &NDFunction,
    f_t: &BigRational,
    n_max: u32,
    spec: &QuadratureSpec,
) -> Result<FourierSeries> {
    let ctx = a.context().clone();
    let half = to_f64(f_t) / 2.0;
    let cuts: Vec<f64> = a.breakpoints().iter().map(to_f64).collect();
    let af = a.lower_closure_f64();
    let mut cos = Vec::with_capacity(n_max as usize + 1);
    let mut sin = Vec::with_capacity(n_max as usize);
    for n in 0..=n_max {
        // More oscillations need more initial panels.
        let mut s = spec.clone();
        s.initial_panels = s.initial_panels.max(1 + n as usize / 2);
        let basis = basis_fn(BasisIndex::cos(n), f_t, &ctx);
        let bf = basis.lower_closure_f64();
        let af2 = af.clone();
        let v = quadrature::integrate(&move |x| af2(x) * bf(x), -half, half, &cuts, &s)?;
        cos.push(NDNumber::from_lower(ctx.clone(), from_f64(v)));
        if n >= 1 {
            let basis = basis_fn(BasisIndex::sin(n), f_t, &ctx);
            let bf = basis.lower_closure_f64();
            let af2 = af.clone();
            let v = quadrature::integrate(&move |x| af2(x) * bf(x), -half, half, &cuts, &s)?;
            sin.push(NDNumber::from_lower(ctx.clone(), from_f64(v)));
        }
    }
    Ok(FourierSeries {
        context: ctx,
        f_t: f_t.clone(),
        cos,
        sin,
    })
}

/// Lowercase partial sum at a lowercase point, harmonics n <= terms.
pub fn reconstruct_lower_f64(s: &FourierSeries, x: f64, terms: usize) -> f64 {
    let ft = to_f64(&s.f_t);
    let amp0 = (1.0 / ft).sqrt();
    let amp = (2.0 / ft).sqrt();
    let w = 2.0 * std::f64::consts::PI / ft;
    let mut acc = to_f64(s.cos[0].lower()) * amp0;
    for n in 1..=terms.min(s.n_max()) {
        let arg = w * n as f64 * x;
        acc += to_f64(s.cos[n].lower()) * amp * arg.cos();
        acc += to_f64(s.sin[n - 1].lower()) * amp * arg.sin();
    }
    acc
}

/// (+)-partial sum of the expansion at X, harmonics n <= terms.
pub fn reconstruct(s: &FourierSeries, x: &NDNumber, terms: usize) -> Result<NDNumber> {
    if x.context() != &s.context {
        return Err(Error::ContextMismatch);
    }
    let v = reconstruct_lower_f64(s, to_f64(x.lower()), terms);
    Ok(NDNumber::from_lower(s.context.clone(), from_f64(v)))
}

/// Both sides of the Parseval formula for real-valued A, B: the scalar
/// product on the left, the coefficient sum on the right (exact in the
/// stored coefficients). The caller asserts closeness with the
/// truncation tail in mind.
pub fn parseval_check(
    a: &NDFunction,
    b: &NDFunction,
    sa: &FourierSeries,
    sb: &FourierSeries,
    spec: &QuadratureSpec,
) -> Result<(NDComplex, NDComplex)> {
    let lhs = scalar_product(&a.clone().into(), &b.clone().into(), &sa.f_t, spec)?;
    let n = sa.n_max().min(sb.n_max());
    let mut acc = BigRational::zero();
    for k in 0..=n {
        acc += sa.cos[k].lower() * sb.cos[k].lower();
        if k >= 1 {
            acc += sa.sin[k - 1].lower() * sb.sin[k - 1].lower();
        }
    }
    let rhs = NDComplex::from_real(NDNumber::from_lower(sa.context.clone(), acc));
    Ok((lhs, rhs))
}

/// n' = f^-1(n), the label of the n-th Laplacian eigenvalue. For the
/// quaternary and middle-third sets this is the digit formula
/// n' = 2 (b_k base^k + ... + b_0) on the binary digits of n.
pub fn spectrum_n_prime(ctx: &Arc<ArithmeticContext>, n: u64) -> Result<BigRational> {
    let n_rat = BigRational::from_integer(BigInt::from(n));
    match &ctx.kind {
        BijectionKind::Identity | BijectionKind::TernaryLine(_) => Ok(n_rat),
        BijectionKind::QuaternaryCantor(branch) => {
            Ok(double_digits_unchecked(&n_rat, 4, *branch))
        }
        BijectionKind::MiddleThirdSelfSimilar => {
            Ok(double_digits_unchecked(&n_rat, 3, Branch::Plus))
        }
        other => Err(Error::UnsupportedContext(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{one_prime, zero_prime};
    use crate::digits::to_digits;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tern_ctx() -> Arc<ArithmeticContext> {
        ArithmeticContext::new(BijectionKind::TernaryLine(Branch::Minus))
    }

    #[test]
    fn basis_values() {
        let ctx = tern_ctx();
        let one = BigRational::one();
        // c_0 is the constant sqrt(1/f(T)) = 1 for f(T) = 1.
        let c0 = basis_fn(BasisIndex::cos(0), &one, &ctx);
        assert_eq!(c0.eval_lower_f64(0.37), 1.0);
        // S_1 vanishes at 0'.
        let s1 = basis_fn(BasisIndex::sin(1), &one, &ctx);
        let v = s1.eval(&zero_prime(&ctx)).unwrap();
        assert!(v.lower().is_zero());
        // C_1 at 0' has lower coordinate sqrt(2).
        let c1 = basis_fn(BasisIndex::cos(1), &one, &ctx);
        let v = c1.eval(&zero_prime(&ctx)).unwrap();
        let err = (v.lower() * v.lower() - rat(2, 1)).abs();
        assert!(err < rat(1, 1 << 30).pow(3));
    }

    #[test]
    fn orthonormality_small() {
        let ctx = tern_ctx();
        let one = BigRational::one();
        let spec = QuadratureSpec::default();
        for n in 0..=3u32 {
            for m in 0..=3u32 {
                let cn = basis_fn(BasisIndex::cos(n), &one, &ctx);
                let cm = basis_fn(BasisIndex::cos(m), &one, &ctx);
                let p = scalar_product(&cn.into(), &cm.into(), &one, &spec).unwrap();
                let expect = if n == m { 1.0 } else { 0.0 };
                assert!((to_f64(p.re.lower()) - expect).abs() < 1e-11);
                assert!(to_f64(p.im.lower()).abs() < 1e-11);
            }
        }
        let c2 = basis_fn(BasisIndex::cos(2), &one, &ctx);
        let s2 = basis_fn(BasisIndex::sin(2), &one, &ctx);
        let p = scalar_product(&c2.into(), &s2.into(), &one, &spec).unwrap();
        assert!(to_f64(p.re.lower()).abs() < 1e-11);
    }

    #[test]
    fn constant_signal_coefficients() {
        let ctx = tern_ctx();
        let one = BigRational::one();
        let spec = QuadratureSpec::default();
        let f = NDFunction::constant(ctx.clone(), rat(1, 1));
        let s = analyze(&f, &one, 4, &spec).unwrap();
        assert!((to_f64(s.cos[0].lower()) - 1.0).abs() < 1e-11);
        for n in 1..=4usize {
            assert!(to_f64(s.cos[n].lower()).abs() < 1e-11);
            assert!(to_f64(s.sin[n - 1].lower()).abs() < 1e-11);
        }
    }

    #[test]
    fn basis_reproduces_itself() {
        let ctx = tern_ctx();
        let one = BigRational::one();
        let spec = QuadratureSpec::default();
        let c3 = basis_fn(BasisIndex::cos(3), &one, &ctx);
        let s = analyze(&c3, &one, 5, &spec).unwrap();
        let x = NDNumber::from_lower(ctx.clone(), rat(1, 5));
        let r = reconstruct(&s, &x, 5).unwrap();
        let direct = c3.eval(&x).unwrap();
        assert!((to_f64(r.lower()) - to_f64(direct.lower())).abs() < 1e-8);
    }

    #[test]
    fn parseval_on_basis_elements() {
        let ctx = tern_ctx();
        let one = BigRational::one();
        let spec = QuadratureSpec::default();
        let c2 = basis_fn(BasisIndex::cos(2), &one, &ctx);
        let s = analyze(&c2, &one, 6, &spec).unwrap();
        let (lhs, rhs) = parseval_check(&c2, &c2, &s, &s, &spec).unwrap();
        assert!((to_f64(lhs.re.lower()) - 1.0).abs() < 1e-10);
        assert!((to_f64(rhs.re.lower()) - 1.0).abs() < 1e-10);
        // orthogonal pair
        let c1 = basis_fn(BasisIndex::cos(1), &one, &ctx);
        let s1f = basis_fn(BasisIndex::sin(1), &one, &ctx);
        let sc1 = analyze(&c1, &one, 6, &spec).unwrap();
        let ss1 = analyze(&s1f, &one, 6, &spec).unwrap();
        let (lhs, rhs) = parseval_check(&c1, &s1f, &sc1, &ss1, &spec).unwrap();
        assert!(to_f64(lhs.re.lower()).abs() < 1e-10);
        assert!(to_f64(rhs.re.lower()).abs() < 1e-10);
    }

    #[test]
    fn spectrum_values() {
        let quat = ArithmeticContext::new(BijectionKind::QuaternaryCantor(Branch::Plus));
        let got: Vec<BigRational> = (1..=5u64)
            .map(|n| spectrum_n_prime(&quat, n).unwrap())
            .collect();
        let expect: Vec<BigRational> = [2i64, 8, 10, 32, 34]
            .iter()
            .map(|&v| rat(v, 1))
            .collect();
        assert_eq!(got, expect);
        // 40 = n'(6) is present; 24 = 4*6 never appears.
        assert_eq!(spectrum_n_prime(&quat, 6).unwrap(), rat(40, 1));
        let tern = tern_ctx();
        assert_eq!(spectrum_n_prime(&tern, 17).unwrap(), rat(17, 1));
        let mid = ArithmeticContext::new(BijectionKind::MiddleThirdSelfSimilar);
        // 6 = 110_2 -> 2*(9+3) = 24 in base 3
        assert_eq!(spectrum_n_prime(&mid, 6).unwrap(), rat(24, 1));
        let fech = ArithmeticContext::new(BijectionKind::Fechner { a: rat(1, 1), b: rat(0, 1) });
        assert!(spectrum_n_prime(&fech, 1).is_err());
    }

    #[test]
    fn quaternary_spectrum_digit_criterion() {
        // every n'/2 has only digits {0,1} in base 4
        let quat = ArithmeticContext::new(BijectionKind::QuaternaryCantor(Branch::Plus));
        for n in 1..200u64 {
            let np = spectrum_n_prime(&quat, n).unwrap();
            let half = np / rat(2, 1);
            assert!(half.is_integer());
            let d = to_digits(&half, 4);
            assert!(d
                .integer
                .iter()
                .all(|&dig| dig == 0 || dig == 1));
        }
    }

    #[test]
    fn laplacian_eigenvalue_relation() {
        // Lap C_n = -(2 n pi / f(T))^2 C_n in lower coordinates.
        let ctx = tern_ctx();
        let one = BigRational::one();
        for n in 1..=2u32 {
            let cn = basis_fn(BasisIndex::cos(n), &one, &ctx);
            let x = NDNumber::from_lower(ctx.clone(), rat(1, 7));
            let lap = crate::calculus::laplacian(&cn, &x).unwrap();
            let val = cn.eval(&x).unwrap();
            let ratio = to_f64(lap.lower()) / to_f64(val.lower());
            let expect = -(2.0 * n as f64 * std::f64::consts::PI).powi(2);
            assert!((ratio / expect - 1.0).abs() < 1e-8, "n={n} ratio {ratio}");
        }
        let _ = one_prime(&ctx);
    }
}
