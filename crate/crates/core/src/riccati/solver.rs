use log::debug;

use super::{rhs_unchecked, riccati_residual, ModelParams, PotentialSpec, SuperpotentialSolution};
use crate::error::{domain, Error, Result};
use crate::specialfns::Tolerance;

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B_LOW: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrator settings for [`solve_modified_riccati_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiOptions {
    /// Local error tolerance per step; `max_iter` caps the shooting iterations.
    pub tol: Tolerance,
    /// Cap on accepted plus rejected steps.
    pub max_steps: usize,
    /// Largest step; defaults to 1/200 of the span so the output grid stays
    /// dense enough for the finite-difference residual.
    pub max_step: Option<f64>,
    /// `|W|` beyond which the solution is declared to have hit a pole.
    pub overflow_guard: f64,
}

impl RiccatiOptions {
    pub fn with_tolerance(tol: Tolerance) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

impl Default for RiccatiOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::new(1e-11, 1e-11, 60).expect("valid default"),
            max_steps: 2_000_000,
            max_step: None,
            overflow_guard: 1e12,
        }
    }
}

/// Solves for the superpotential on `span` from the seed `W(span.0) = w_start`,
/// with `tol` as local error tolerance. See [`solve_modified_riccati_with`].
pub fn solve_modified_riccati(
    potential: &PotentialSpec,
    params: &ModelParams,
    span: (f64, f64),
    w_start: f64,
    tol: Tolerance,
) -> Result<SuperpotentialSolution> {
    solve_modified_riccati_with(potential, params, span, w_start, &RiccatiOptions::with_tolerance(tol))
}

/// Adaptive Dormand–Prince integration of `W' = rhs(r, W, S)`, `S' = W`.
///
/// The anchor `r₀` must lie inside `span`; the step sequence lands on it
/// exactly and `S` is shifted so that `S(r₀) = 0`. When the memory term is
/// active (ℓ > 0) and `r₀` is not the start point, the starting value of `S`
/// is found by secant shooting first, because the shift alone would change
/// the equation being solved.
pub fn solve_modified_riccati_with(
    potential: &PotentialSpec,
    params: &ModelParams,
    span: (f64, f64),
    w_start: f64,
    opts: &RiccatiOptions,
) -> Result<SuperpotentialSolution> {
    params.validate()?;
    opts.tol.validate()?;
    let (r_start, r_end) = span;
    if !(r_start > 0.0 && r_end > r_start && r_end.is_finite()) {
        return domain(format!("span must satisfy 0 < r_start < r_end, got [{r_start}, {r_end}]"));
    }
    if !w_start.is_finite() {
        return domain("W_start must be finite");
    }
    let r0 = params.r_anchor;
    if r0 < r_start || r0 > r_end {
        return domain(format!(
            "anchor r0 = {r0} must lie inside the span [{r_start}, {r_end}]"
        ));
    }
    potential.check_span(r_start, r_end)?;

    let integrator = Integrator {
        potential,
        params,
        opts,
    };

    let s_start = if params.angular_strength() != 0.0 && r0 > r_start {
        integrator.shoot_anchor(r_start, w_start)?
    } else {
        0.0
    };

    let mut traj = integrator.run(r_start, r_end, w_start, s_start, Some(r0))?;
    let anchor = traj
        .r
        .iter()
        .position(|&r| r == r0)
        .expect("integrator lands on the anchor");
    let offset = traj.s[anchor];
    for s in &mut traj.s {
        *s -= offset;
    }
    debug!(
        "riccati: {} steps on [{r_start}, {r_end}], S(r0) shift {offset:e}",
        traj.r.len() - 1
    );

    let mut sol = SuperpotentialSolution {
        r: traj.r,
        w: traj.w,
        s: traj.s,
        params: *params,
        max_residual: f64::NAN,
        tolerance: Some(opts.tol),
    };
    sol.max_residual = riccati_residual(&sol, potential);
    Ok(sol)
}

struct Trajectory {
    r: Vec<f64>,
    w: Vec<f64>,
    s: Vec<f64>,
}

struct Integrator<'a> {
    potential: &'a PotentialSpec,
    params: &'a ModelParams,
    opts: &'a RiccatiOptions,
}

impl Integrator<'_> {
    fn deriv(&self, r: f64, y: [f64; 2]) -> [f64; 2] {
        let u = self.potential.value(r);
        [rhs_unchecked(r, y[0], y[1], u, self.params), y[0]]
    }

    /// Secant iteration on `S(r_start)` so that the integrated `S(r₀)` vanishes.
    ///
    /// The first guess assumes `W ∝ 1/r` between `r_start` and `r₀`. Trial
    /// values whose integration hits a pole are pulled back halfway toward
    /// the last good value.
    fn shoot_anchor(&self, r_start: f64, w_start: f64) -> Result<f64> {
        let r0 = self.params.r_anchor;
        let target = |s0: f64| -> Result<f64> {
            let t = self.run(r_start, r0, w_start, s0, None)?;
            Ok(*t.s.last().expect("non-empty trajectory"))
        };
        let damped = |from: f64, mut to: f64| -> Result<(f64, f64)> {
            let mut last = None;
            for _ in 0..30 {
                match target(to) {
                    Ok(g) => return Ok((to, g)),
                    Err(e @ (Error::Blowup { .. } | Error::StepSizeUnderflow { .. })) => {
                        last = Some(e);
                        to = 0.5 * (from + to);
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("at least one failed trial"))
        };

        let eps = 10.0 * self.opts.tol.abs_tol;
        let guess = -w_start * r_start * (r0 / r_start).ln();
        let (mut sa, mut ga) = match target(guess) {
            Ok(g) => (guess, g),
            Err(_) => damped(guess, 0.0)?,
        };
        if ga.abs() <= eps {
            return Ok(sa);
        }
        let (mut sb, mut gb) = damped(sa, sa - ga)?;
        for _ in 0..self.opts.tol.max_iter {
            if gb.abs() <= eps + self.opts.tol.rel_tol * sb.abs() {
                return Ok(sb);
            }
            if gb == ga {
                break;
            }
            let sc = sb - gb * (sb - sa) / (gb - ga);
            // below this the update is integration noise
            if (sc - sb).abs() <= 10.0 * (self.opts.tol.abs_tol + self.opts.tol.rel_tol * sb.abs()) {
                return Ok(sc);
            }
            sa = sb;
            ga = gb;
            (sb, gb) = damped(sa, sc)?;
        }
        Err(Error::NoConvergence {
            what: "S(r0) shooting",
            iterations: self.opts.tol.max_iter,
        })
    }

    fn run(
        &self,
        r_start: f64,
        r_end: f64,
        w0: f64,
        s0: f64,
        stop: Option<f64>,
    ) -> Result<Trajectory> {
        let tol = self.opts.tol;
        let span = r_end - r_start;
        let h_max = self.opts.max_step.unwrap_or(span / 200.0).min(span);
        let mut h = (0.01 * r_start).min(h_max);
        let mut r = r_start;
        let mut y = [w0, s0];
        let mut k1 = self.deriv(r, y);
        let mut out = Trajectory {
            r: vec![r],
            w: vec![w0],
            s: vec![s0],
        };
        let mut stops: Vec<f64> = stop.into_iter().filter(|&x| x > r_start && x < r_end).collect();
        stops.push(r_end);
        let mut next_stop = 0;
        let mut rejected = false;

        for _ in 0..self.opts.max_steps {
            let target = stops[next_stop];
            let remaining = target - r;
            let landing = h >= remaining;
            if landing {
                h = remaining;
            } else if 2.0 * h > remaining {
                h = 0.5 * remaining;
            }
            if h <= 1e-14 * r.abs().max(f64::MIN_POSITIVE) {
                return Err(self.failure(r, y[0]));
            }

            let (y_new, err_vec, k_last) = self.step(r, y, k1, h);
            let mut err: f64 = 0.0;
            for i in 0..2 {
                let scale = tol.abs_tol + tol.rel_tol * y[i].abs().max(y_new[i].abs());
                err = err.max(err_vec[i].abs() / scale);
            }
            if !err.is_finite() || !y_new[0].is_finite() {
                h *= 0.2;
                rejected = true;
                continue;
            }
            if err <= 1.0 {
                r = if landing { target } else { r + h };
                y = y_new;
                k1 = k_last;
                out.r.push(r);
                out.w.push(y[0]);
                out.s.push(y[1]);
                if y[0].abs() > self.opts.overflow_guard {
                    return Err(Error::Blowup { r, w: y[0] });
                }
                if landing {
                    if next_stop + 1 == stops.len() {
                        return Ok(out);
                    }
                    next_stop += 1;
                }
                let mut factor = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
                factor = factor.clamp(0.2, 5.0);
                if rejected {
                    factor = factor.min(1.0);
                }
                rejected = false;
                h = (h * factor).min(h_max);
            } else {
                rejected = true;
                h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        Err(Error::NoConvergence {
            what: "riccati integrator",
            iterations: self.opts.max_steps,
        })
    }

    fn failure(&self, r: f64, w: f64) -> Error {
        if w.abs() > self.opts.overflow_guard.sqrt() || !w.is_finite() {
            Error::Blowup { r, w }
        } else {
            Error::StepSizeUnderflow { r }
        }
    }

    /// One Dormand–Prince step; returns the 5th-order state, the embedded
    /// error estimate and the FSAL derivative at the new point.
    fn step(&self, r: f64, y: [f64; 2], k1: [f64; 2], h: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let mut k = [[0.0; 2]; 7];
        k[0] = k1;
        for stage in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            k[stage] = self.deriv(r + C[stage] * h, ys);
        }
        let mut y_new = y;
        let mut err = [0.0; 2];
        for (i, ki) in k.iter().enumerate() {
            for c in 0..2 {
                y_new[c] += h * B[i] * ki[c];
                err[c] += h * (B[i] - B_LOW[i]) * ki[c];
            }
        }
        (y_new, err, k[6])
    }
}
