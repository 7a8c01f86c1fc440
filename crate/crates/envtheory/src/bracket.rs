//! Bracketed root refinement (Brent's method) and log-grid scanning.
//!
//! The solver and the critical-coupling module both locate roots the same
//! way: scan a logarithmic grid for sign changes, then refine each bracket
//! with inverse quadratic interpolation / secant steps guarded by bisection.

use alloc::vec::Vec;

use crate::math::powf;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct RootResult {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

/// Brent's method on a sign-changing bracket [a, b].
pub(crate) fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    a0: f64,
    b0: f64,
    fa0: f64,
    fb0: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<RootResult> {
    let (mut a, mut b) = (a0, b0);
    let (mut fa, mut fb) = (fa0, fb0);
    if fa == 0.0 {
        return Ok(RootResult {
            root: a,
            residual: 0.0,
            iterations: 0,
            bracket: (a0, b0),
        });
    }
    if fb == 0.0 {
        return Ok(RootResult {
            root: b,
            residual: 0.0,
            iterations: 0,
            bracket: (a0, b0),
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NonConvergence {
            bracket: (a0, b0),
            residual: fb,
        });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * rel_tol * b.abs().max(1e-300);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(RootResult {
                root: b,
                residual: fb,
                iterations: iter,
                bracket: (a0, b0),
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // interpolation step: secant, or inverse quadratic when distinct
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::NonConvergence {
                bracket: (a0, b0),
                residual: fb,
            });
        }
    }
    Err(Error::NonConvergence {
        bracket: (a0, b0),
        residual: fb,
    })
}

/// Logarithmically spaced grid over [lo, hi].
pub(crate) fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    let ratio = hi / lo;
    (0..n)
        .map(|i| lo * powf(ratio, i as f64 / (n - 1) as f64))
        .collect()
}

/// All roots of `f` bracketed by sign changes on `grid`, refined with
/// [`brent`]. Grid points where `f` is non-finite are skipped; an exact zero
/// at a grid point is itself recorded as a root.
pub(crate) fn scan_roots<F: FnMut(f64) -> f64>(
    mut f: F,
    grid: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<Vec<RootResult>> {
    let mut roots: Vec<RootResult> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if fx == 0.0 {
            roots.push(RootResult {
                root: x,
                residual: 0.0,
                iterations: 0,
                bracket: (x, x),
            });
            prev = None;
            continue;
        }
        if let Some((px, pfx)) = prev {
            if pfx.signum() != fx.signum() {
                let r = brent(&mut f, px, x, pfx, fx, rel_tol, max_iter)?;
                roots.push(r);
            }
        }
        prev = Some((x, fx));
    }
    // merge near-duplicates produced by a root sitting next to a grid node
    roots.dedup_by(|b, a| (a.root - b.root).abs() <= 1e-9 * (a.root.abs() + b.root.abs()));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_cubic() {
        // x^3 - 2x - 5, classic test root near 2.0945514815423265
        let f = |x: f64| x * x * x - 2.0 * x - 5.0;
        let r = brent(f, 2.0, 3.0, f(2.0), f(3.0), 1e-14, 100).unwrap();
        assert!((r.root - 2.094_551_481_542_326_5).abs() < 1e-12);
    }

    #[test]
    fn brent_transcendental() {
        // e^{-x} = x has its root at the omega constant
        let f = |x: f64| (-x).exp() - x;
        let r = brent(f, 0.0, 1.0, f(0.0), f(1.0), 1e-14, 100).unwrap();
        assert!((r.root - 0.567_143_290_409_783_8).abs() < 1e-13);
    }

    #[test]
    fn scan_finds_both_roots() {
        // (ln x - 1)(ln x - 4) has roots at e and e^4 on a log grid
        let f = |x: f64| (x.ln() - 1.0) * (x.ln() - 4.0);
        let grid = log_grid(1e-2, 1e4, 200);
        let roots = scan_roots(f, &grid, 1e-13, 100).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].root - core::f64::consts::E).abs() < 1e-10);
        assert!((roots[1].root - core::f64::consts::E.powi(4)).abs() < 1e-8);
    }

    #[test]
    fn scan_skips_non_finite_stretches() {
        let f = |x: f64| if x < 1.0 { f64::NAN } else { x - 2.0 };
        let grid = log_grid(1e-3, 1e3, 300);
        let roots = scan_roots(f, &grid, 1e-13, 100).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].root - 2.0).abs() < 1e-10);
    }
}
