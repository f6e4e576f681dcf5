//! One-dimensional bracketing root finder and golden-section minimizer.

use crate::error::{Error, Result};

/// Tolerances shared by the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Residual tolerance for root finding (`|g(x)| ≤ tol`).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Bisection for a nonincreasing `g` on a bracket with `g(lo) ≥ 0 ≥ g(hi)`.
///
/// Stops at `|g| ≤ tol` or when the bracket can no longer be split.
pub fn bisect_decreasing<G: FnMut(f64) -> f64>(
    mut g: G,
    mut lo: f64,
    mut hi: f64,
    opts: SolverOptions,
    what: &'static str,
) -> Result<Root> {
    for it in 1..=opts.max_iter {
        let mid = 0.5 * (lo + hi);
        let r = g(mid);
        if r.is_nan() {
            return Err(Error::Solver {
                what,
                iterations: it,
                lo,
                hi,
            });
        }
        if r.abs() <= opts.tol || mid <= lo || mid >= hi {
            return Ok(Root {
                x: mid,
                residual: r,
                iterations: it,
            });
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Solver {
        what,
        iterations: opts.max_iter,
        lo,
        hi,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`.
///
/// Returns the best abscissa seen and its value once the bracket is narrower
/// than `x_tol`.
pub fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    x_tol: f64,
    max_iter: usize,
    what: &'static str,
) -> Result<(f64, f64)> {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a).abs() <= x_tol {
            return Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) });
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    Err(Error::Solver {
        what,
        iterations: max_iter,
        lo: a,
        hi: b,
    })
}
