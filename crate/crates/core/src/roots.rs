//! Bracketed root finding for nondecreasing functions.

/// Solves `f(x) = target` on `[lo, hi]` for nondecreasing `f` with
/// `f(lo) <= target <= f(hi)`, using the Illinois variant of regula falsi
/// with a bisection fallback. Stops when `|f(x) - target| <= tol` or the
/// bracket collapses to adjacent floats.
pub fn solve_monotone<F: Fn(f64) -> f64 + ?Sized>(f: &F, target: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo) - target;
    let mut fhi = f(hi) - target;
    if flo >= 0.0 {
        return lo;
    }
    if fhi <= 0.0 {
        return hi;
    }
    let mut side = 0i8;
    for iter in 0..200 {
        let mut x = if iter % 4 == 3 {
            0.5 * (lo + hi)
        } else {
            (lo * fhi - hi * flo) / (fhi - flo)
        };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        if x <= lo || x >= hi {
            break;
        }
        let fx = f(x) - target;
        if fx.abs() <= tol {
            return x;
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    if -flo < fhi { lo } else { hi }
}
