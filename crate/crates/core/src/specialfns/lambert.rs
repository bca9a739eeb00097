use std::f64::consts::E;

use super::Tolerance;
use crate::error::{domain, Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;

/// Principal branch `W₀(x)` of the Lambert W function, `W e^W = x`, `W ≥ -1`.
///
/// Halley iteration from a piecewise seed: branch-point series below -0.3,
/// Winitzki's log form in the middle and the two-term asymptotic for large x.
/// Beyond 1e20 the iteration switches to Newton on `w + ln w = ln x` so that
/// `w e^w` is never formed.
pub fn lambert_w0(x: f64, tol: Tolerance) -> Result<f64> {
    tol.validate()?;
    if x.is_nan() || x == f64::INFINITY {
        return domain(format!("lambert_w0 needs a finite argument, got {x}"));
    }
    if x < BRANCH_POINT {
        return domain(format!("lambert_w0 is real only for x >= -1/e, got {x}"));
    }
    if x == BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x > 1e20 {
        return large_argument(x, tol);
    }

    let mut w = initial_guess(x);
    for _ in 0..tol.max_iter {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            return Ok(w);
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = (w - step).max(-1.0);
        let delta = (next - w).abs();
        w = next;
        if delta <= tol.abs_tol + tol.rel_tol * w.abs() || f == 0.0 {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        what: "lambert_w0",
        iterations: tol.max_iter,
    })
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.3 {
        // series in p = sqrt(2(ex + 1)) about the branch point
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

fn large_argument(x: f64, tol: Tolerance) -> Result<f64> {
    let lx = x.ln();
    let mut w = lx - lx.ln();
    for _ in 0..tol.max_iter {
        let next = w * (1.0 + lx - w.ln()) / (1.0 + w);
        let delta = (next - w).abs();
        w = next;
        if delta <= tol.abs_tol + tol.rel_tol * w {
            return Ok(w);
        }
    }
    Err(Error::NoConvergence {
        what: "lambert_w0",
        iterations: tol.max_iter,
    })
}
