//! Scalar root finding and maximisation on a bracket.

/// Outcome of a bracketed root search.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub x: f64,
    pub residual: f64,
    pub converged: bool,
}

/// False-position iteration with the Illinois weight adjustment.
///
/// `f(lo)` and `f(hi)` must have opposite signs. Stops once `|f(x)| <= tol`
/// or after `max_iter` steps.
pub(crate) fn regula_falsi<F>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Root
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    debug_assert!(f_lo * f_hi <= 0.0, "root is not bracketed");
    if f_lo.abs() <= tol {
        return Root { x: lo, residual: f_lo, converged: true };
    }
    if f_hi.abs() <= tol {
        return Root { x: hi, residual: f_hi, converged: true };
    }

    // side that was retained on the previous step: -1 lo, +1 hi
    let mut retained = 0i8;
    let mut best = Root { x: lo, residual: f_lo, converged: false };
    for _ in 0..max_iter {
        let x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        let fx = f(x);
        if fx.abs() < best.residual.abs() {
            best = Root { x, residual: fx, converged: false };
        }
        if fx.abs() <= tol {
            return Root { x, residual: fx, converged: true };
        }
        if fx * f_hi > 0.0 {
            hi = x;
            f_hi = fx;
            if retained == -1 {
                f_lo *= 0.5;
            }
            retained = -1;
        } else {
            lo = x;
            f_lo = fx;
            if retained == 1 {
                f_hi *= 0.5;
            }
            retained = 1;
        }
        if hi == lo {
            break;
        }
    }
    best
}

/// Golden-section search for the maximiser of a unimodal function on `[a, b]`.
pub(crate) fn golden_max<F>(f: F, mut a: f64, mut b: f64, iters: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}
