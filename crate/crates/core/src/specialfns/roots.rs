use super::Tolerance;
use crate::error::{domain, Error, Result};

/// Root of `f` on `[a, b]` by bisection with a secant step per iteration.
///
/// Each iteration tries the secant point, then bisects, so the bracket at
/// least halves. Returns the bracket end with the smaller `|f|` once the
/// bracket is no wider than `tol.abs_tol`. The result always lies in `[a, b]`.
pub fn find_root_bracketed<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    tol.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return domain(format!("invalid bracket [{a}, {b}]"));
    }
    let (mut lo, mut hi) = (a, b);
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo.is_nan() || fhi.is_nan() {
        return domain("function is NaN at a bracket end");
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket {
            a,
            b,
            fa: flo,
            fb: fhi,
        });
    }

    for _ in 0..tol.max_iter {
        if hi - lo <= tol.abs_tol {
            break;
        }
        let secant = hi - fhi * (hi - lo) / (fhi - flo);
        if secant > lo && secant < hi {
            let fs = f(secant);
            if fs == 0.0 {
                return Ok(secant);
            }
            if fs.signum() == flo.signum() {
                lo = secant;
                flo = fs;
            } else {
                hi = secant;
                fhi = fs;
            }
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // adjacent floats
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }

    let adjacent = 0.5 * (lo + hi) <= lo || 0.5 * (lo + hi) >= hi;
    if hi - lo <= tol.abs_tol || adjacent {
        Ok(if flo.abs() <= fhi.abs() { lo } else { hi })
    } else {
        Err(Error::NoConvergence {
            what: "find_root_bracketed",
            iterations: tol.max_iter,
        })
    }
}
