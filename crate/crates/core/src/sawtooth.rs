//! The Cantorian sawtooth example: a(x) = x on [-1/2, 1/2), extended
//! periodically, conjugated through the active bijection, plus the
//! sampled datasets behind its figures.

use std::sync::Arc;

use num::bigint::BigInt;
use num::{BigRational, One};

use crate::arithmetic::ArithmeticContext;
use crate::calculus::NDFunction;
use crate::error::{Error, Result};
use crate::fourier::{reconstruct_lower_f64, FourierSeries};
use crate::rational::{from_f64, to_f64};

/// Lowercase sawtooth with unit period: x - round(x), value x on
/// [-1/2, 1/2), jump of size 1 at half-integers.
pub fn sawtooth_lower(x: &BigRational) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    x - (x + half).floor()
}

pub fn sawtooth_lower_f64(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

/// The conjugated sawtooth A = f^-1 . a . f, with its jump locations
/// declared for quadrature.
pub fn sawtooth_nd(ctx: &Arc<ArithmeticContext>) -> NDFunction {
    let breakpoints: Vec<BigRational> = (-8i64..=8)
        .map(|k| BigRational::new(BigInt::from(2 * k + 1), BigInt::from(2)))
        .collect();
    NDFunction::from_lower(
        ctx.clone(),
        "sawtooth",
        Arc::new(|x, _| sawtooth_lower(x)),
        Arc::new(sawtooth_lower_f64),
    )
    .with_breakpoints(breakpoints)
}

/// One sampled curve point; `coordinate_system` is "lower" for the
/// lowercase plane and "upper" for the g-mapped plane.
#[derive(Debug, Clone)]
pub struct FigurePoint {
    pub x: f64,
    pub y: f64,
    pub coordinate_system: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    /// Staircase g = f^-1 of the active bijection (typically the
    /// ternary line).
    Fig1Upper,
    /// Same for the quaternary Plus set.
    Fig1Lower,
    /// Lowercase sawtooth over one period.
    Fig2Upper,
    /// Cantorian sawtooth in upper coordinates.
    Fig2Lower,
    /// Partial-sum reconstruction with the given number of harmonics,
    /// emitted in both coordinate systems.
    Fig3Terms(usize),
}

fn period_grid(samples: usize) -> Vec<BigRational> {
    let n = BigInt::from(samples as i64);
    (0..samples)
        .map(|i| {
            BigRational::new(BigInt::from(i as i64), n.clone())
                - BigRational::new(BigInt::one(), BigInt::from(2))
        })
        .collect()
}

/// Sampled figure datasets. Sampling is uniform in lower coordinates;
/// upper coordinates are the exact g-image of the lower ones.
pub fn figure_data(
    kind: FigureKind,
    samples: usize,
    ctx: &Arc<ArithmeticContext>,
    series: Option<&FourierSeries>,
) -> Result<Vec<FigurePoint>> {
    if samples < 2 {
        return Err(Error::Domain("need at least 2 samples".into()));
    }
    let mut out = Vec::new();
    match kind {
        FigureKind::Fig1Upper | FigureKind::Fig1Lower => {
            let map_ctx = if kind == FigureKind::Fig1Upper {
                ctx.clone()
            } else {
                ArithmeticContext::with_precision(
                    crate::arithmetic::BijectionKind::QuaternaryCantor(crate::digits::Branch::Plus),
                    ctx.precision_bits,
                )
            };
            // x in [0, 2], g(x) on the vertical axis.
            for i in 0..samples {
                let x = BigRational::new(BigInt::from(2 * i as i64), BigInt::from(samples as i64 - 1));
                let g = map_ctx.inverse(&x);
                out.push(FigurePoint {
                    x: to_f64(&x),
                    y: to_f64(&g),
                    coordinate_system: "upper",
                });
            }
        }
        FigureKind::Fig2Upper => {
            for x in period_grid(samples) {
                out.push(FigurePoint {
                    x: to_f64(&x),
                    y: to_f64(&sawtooth_lower(&x)),
                    coordinate_system: "lower",
                });
            }
        }
        FigureKind::Fig2Lower => {
            for x in period_grid(samples) {
                let upper_x = ctx.inverse(&x);
                let upper_y = ctx.inverse(&sawtooth_lower(&x));
                out.push(FigurePoint {
                    x: to_f64(&upper_x),
                    y: to_f64(&upper_y),
                    coordinate_system: "upper",
                });
            }
        }
        FigureKind::Fig3Terms(terms) => {
            let s = series.ok_or_else(|| {
                Error::Domain("fig3 needs precomputed Fourier coefficients".into())
            })?;
            if terms > s.n_max() {
                return Err(Error::Domain(format!(
                    "series holds {} harmonics, {terms} requested",
                    s.n_max()
                )));
            }
            for x in period_grid(samples) {
                let y = reconstruct_lower_f64(s, to_f64(&x), terms);
                out.push(FigurePoint {
                    x: to_f64(&x),
                    y,
                    coordinate_system: "lower",
                });
                let upper_x = ctx.inverse(&x);
                let upper_y = ctx.inverse(&from_f64(y));
                out.push(FigurePoint {
                    x: to_f64(&upper_x),
                    y: to_f64(&upper_y),
                    coordinate_system: "upper",
                });
            }
        }
    }
    Ok(out)
}

/// Largest excess of the lowercase partial sum over the signal itself
/// on a dense grid approaching the jump at x = 1/2 from the left. For a
/// unit jump the classical Gibbs overshoot is about 0.0895 and the
/// excess over the signal reaches it already at moderate term counts
/// (the excess over the one-sided limit 1/2 converges only as O(1/n)).
pub fn gibbs_overshoot(series: &FourierSeries, terms: usize) -> f64 {
    let mut max = f64::MIN;
    let n = 20_000;
    for i in 0..n {
        let x = 0.35 + 0.15 * (i as f64 / n as f64);
        let v = reconstruct_lower_f64(series, x, terms) - sawtooth_lower_f64(x);
        if v > max {
            max = v;
        }
    }
    max
}
