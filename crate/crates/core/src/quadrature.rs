//! Composite Gauss-Legendre quadrature with panel doubling.

use std::sync::Mutex;

use crate::error::{Error, Result};

/// Quadrature configuration. `breakpoints` are abscissae where the
/// integrand is allowed to jump; the domain is split there.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub initial_panels: usize,
    pub max_panels: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: 32,
            initial_panels: 4,
            max_panels: 1 << 14,
            rel_tol: 1e-12,
            abs_tol: 1e-14,
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on
/// the Legendre recurrence. Cached per degree.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: Mutex<Vec<(usize, Vec<f64>, Vec<f64>)>> = Mutex::new(Vec::new());
    let mut cache = CACHE.lock().unwrap();
    if let Some((_, x, w)) = cache.iter().find(|(m, _, _)| *m == n) {
        return (x.clone(), w.clone());
    }
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n and P_n' via the three-term recurrence.
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let k = k as f64;
            let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    cache.push((n, xs.clone(), ws.clone()));
    (xs, ws)
}

fn composite(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Integrate over [a, b] on one smooth piece, doubling panels until two
/// successive composite rules agree to tolerance.
fn integrate_piece(f: &dyn Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut panels = spec.initial_panels.max(1);
    let mut prev = composite(f, a, b, panels, spec.nodes);
    while panels <= spec.max_panels {
        panels *= 2;
        let cur = composite(f, a, b, panels, spec.nodes);
        let err = (cur - prev).abs();
        if err <= spec.abs_tol + spec.rel_tol * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergent {
        tol: spec.rel_tol,
        panels,
    })
}

/// Integrate over [a, b], splitting at the supplied breakpoints.
/// Bounds may be in either order (the usual sign convention applies).
pub fn integrate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|x| *x > lo && *x < hi)
        .collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let mut total = 0.0;
    let mut start = lo;
    for c in cuts.into_iter().chain(std::iter::once(hi)) {
        total += integrate_piece(f, start, c, spec)?;
        start = c;
    }
    Ok(sign * total)
}
