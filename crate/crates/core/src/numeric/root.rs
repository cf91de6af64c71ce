//! Bracketed scalar root finding.

use roots::{find_root_brent, SimpleConvergency};

/// Brent's method on a bracket [a, b]; `None` when the bracket has no sign
/// change or the iteration does not converge.
pub fn brent<F: FnMut(f64) -> f64>(a: f64, b: f64, tol: f64, f: F) -> Option<f64> {
    let mut conv = SimpleConvergency {
        eps: tol,
        max_iter: 200,
    };
    find_root_brent(a, b, f, &mut conv).ok()
}

/// Scan `grid` for the first sign change of `f` and refine it with Brent.
pub fn first_root_on_grid<F: FnMut(f64) -> f64>(grid: &[f64], tol: f64, mut f: F) -> Option<f64> {
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if !fx.is_finite() {
            prev = None;
            continue;
        }
        if fx == 0.0 {
            return Some(x);
        }
        if let Some((xp, fp)) = prev {
            if fp * fx < 0.0 {
                return brent(xp, x, tol, &mut f);
            }
        }
        prev = Some((x, fx));
    }
    None
}
