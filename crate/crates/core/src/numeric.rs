//! Scalar root bracketing.

use crate::error::{Error, Result};

const MAX_ITERS: usize = 400;

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops once the bracket width is at most `tol` relative to the larger
/// endpoint magnitude, or when the midpoint no longer moves. Infinite values of
/// `f` are fine as long as their sign is meaningful (e.g. `1/k` at `k = 0`).
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NonFinite(what));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::RootNotBracketed { what, lo, hi });
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..MAX_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol * lo.abs().max(hi.abs()) {
            return Ok(mid.clamp(lo, hi));
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::NonFinite(what));
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Grows `hi` geometrically from `start` until `pred(hi)` holds.
pub fn expand_upper<P>(start: f64, limit: f64, mut pred: P) -> Option<f64>
where
    P: FnMut(f64) -> bool,
{
    let mut hi = start;
    while hi <= limit {
        if pred(hi) {
            return Some(hi);
        }
        hi *= 2.0;
    }
    None
}
