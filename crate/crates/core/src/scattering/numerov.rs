use std::f64::consts::FRAC_PI_2;

use log::{debug, warn};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::line::LinePotential;
use crate::error::{domain, Error, Result};

/// `k·h` above which the wave is not resolved and the solve is refused.
pub const KH_LIMIT: f64 = 0.5;
/// `k·h` above which a warning is logged.
pub const KH_RECOMMENDED: f64 = 0.1;

const AUTO_KH: f64 = 0.05;
const AUTO_STEPS_PER_SCALE: f64 = 50.0;
const MAX_NODES: f64 = 1e8;
const HANDOFF_SUBSTEPS: usize = 32;
const RESCALE_ABOVE: f64 = 1e100;

/// Grid for the line integration. `None` picks a value from the energy and
/// the potential.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringNumerics {
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub window: Option<f64>,
}

impl ScatteringNumerics {
    pub fn fixed(step: f64, window: f64) -> Self {
        Self {
            step: Some(step),
            window: Some(window),
        }
    }

    /// Resolve to a concrete `(h, w_max)`.
    pub fn resolve(&self, potential: &LinePotential, epsilon: f64) -> Result<(f64, f64)> {
        let k = epsilon.sqrt();
        let scale = potential.length_scale();
        let h = match self.step {
            Some(h) if h > 0.0 && h.is_finite() => h,
            Some(h) => return domain(format!("step must be positive, got {h}")),
            None => (AUTO_KH / k).min(scale / AUTO_STEPS_PER_SCALE),
        };
        let (lo, hi) = potential.domain();
        let reach = lo.abs().min(hi.abs());
        let window = match self.window {
            Some(w) if w > 0.0 && w.is_finite() => w,
            Some(w) => return domain(format!("window must be positive, got {w}")),
            None => {
                let mu = (4.0 * potential.tail_strength() + 1.0).abs();
                let quarter_wave = FRAC_PI_2 / k;
                (potential.support_halfwidth() + quarter_wave)
                    .max((30.0 + mu) / k)
                    .max(4.0 * scale)
                    .min(reach)
            }
        };
        if window > reach {
            return domain(format!("window {window} exceeds the potential's range {reach}"));
        }
        if let Some(b) = potential.breakpoints().iter().map(|b| b.abs()).reduce(f64::max) {
            if b >= window {
                return domain(format!("window {window} does not enclose the breakpoint at {b}"));
            }
        }
        if 2.0 * window / h > MAX_NODES {
            return domain(format!("grid of {:.3e} nodes is too large", 2.0 * window / h));
        }
        Ok((h, window))
    }
}

/// Side the unit-flux wave comes in from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Incidence {
    #[default]
    FromRight,
    FromLeft,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub epsilon: f64,
    pub k: f64,
    /// Transmitted amplitude, i.e. flux lost to the other branch.
    pub t: Complex64,
    /// Reflected amplitude.
    pub r: Complex64,
    /// `|t|² + |r|² − 1`.
    pub flux_defect: f64,
    pub step: f64,
    pub window: f64,
}

impl ScatteringAmplitudes {
    pub fn transmission(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn reflection(&self) -> f64 {
        self.r.norm_sqr()
    }
}

/// Amplitudes for a wave incident from `w = +∞`.
pub fn solve_scattering(
    potential: &LinePotential,
    epsilon: f64,
    numerics: &ScatteringNumerics,
) -> Result<ScatteringAmplitudes> {
    solve_scattering_from(potential, epsilon, numerics, Incidence::FromRight)
}

pub fn solve_scattering_from(
    potential: &LinePotential,
    epsilon: f64,
    numerics: &ScatteringNumerics,
    incidence: Incidence,
) -> Result<ScatteringAmplitudes> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return domain(format!("energy must be positive and finite, got {epsilon}"));
    }
    let (h, window) = numerics.resolve(potential, epsilon)?;
    let k = epsilon.sqrt();
    let kh = k * h;
    if kh > KH_LIMIT {
        return Err(Error::Resolution { kh, limit: KH_LIMIT });
    }
    if kh > KH_RECOMMENDED {
        warn!("k*h = {kh:.3} exceeds the recommended {KH_RECOMMENDED}");
    }

    // Incidence from the left is incidence from the right on U(−w).
    let mirror = incidence == Incidence::FromLeft;
    let original = potential.breakpoints();
    let pieces = original.len() + 1;
    let mut breaks: Vec<f64> = if mirror {
        original.iter().rev().map(|b| -b).collect()
    } else {
        original
    };
    breaks.dedup();
    let eval = |w: f64, piece: usize| {
        if mirror {
            potential.value_in_piece(-w, pieces - 1 - piece)
        } else {
            potential.value_in_piece(w, piece)
        }
    };

    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(-window);
    edges.extend_from_slice(&breaks);
    edges.push(window);

    let mu = 4.0 * potential.tail_strength() + 1.0;
    let mut exponent = 0i32;
    let mut y_prev = Complex64::default();
    let mut y_cur = Complex64::default();
    let mut last = Vec::new();
    let mut last_step = h;

    for (piece, edge) in edges.windows(2).enumerate() {
        let (a, b) = (edge[0], edge[1]);
        let n = ((b - a) / h).ceil().max(2.0) as usize;
        let hs = (b - a) / n as f64;
        let q = |w: f64| epsilon - eval(w, piece);
        let c = hs * hs / 12.0;

        let (mut y0, mut y1) = if piece == 0 {
            let kd = discrete_wavenumber(epsilon, hs);
            (
                riccati_hankel(kd * a.abs(), mu, 1.0),
                riccati_hankel(kd * (a + hs).abs(), mu, 1.0),
            )
        } else {
            // derivative at the breakpoint from the two last nodes of the left piece
            let (a1, a2) = fundamental(|w| epsilon - eval(w, piece - 1), a, -last_step);
            let dy = (y_prev - y_cur * a1.0) / a2.0;
            let (c1, c2) = fundamental(q, a, hs);
            (y_cur, y_cur * c1.0 + dy * c2.0)
        };

        let is_last = piece + 2 == edges.len();
        if is_last {
            last.clear();
            last.reserve(n + 1);
            last.push(y0);
            last.push(y1);
        }
        let mut q_prev = q(a);
        let mut q_cur = q(a + hs);
        for i in 1..n {
            let w_next = if i + 1 == n { b } else { a + (i + 1) as f64 * hs };
            let q_next = q(w_next);
            let y2 = (y1 * (2.0 * (1.0 - 5.0 * c * q_cur)) - y0 * (1.0 + c * q_prev)) / (1.0 + c * q_next);
            y0 = y1;
            y1 = y2;
            q_prev = q_cur;
            q_cur = q_next;
            if is_last {
                last.push(y1);
            }
            if y1.norm() > RESCALE_ABOVE {
                y0 /= RESCALE_ABOVE;
                y1 /= RESCALE_ABOVE;
                exponent += 1;
                for v in &mut last {
                    *v /= RESCALE_ABOVE;
                }
            }
            if !y1.re.is_finite() || !y1.im.is_finite() {
                return Err(Error::Blowup {
                    r: w_next,
                    w: y1.norm(),
                });
            }
        }
        y_prev = y0;
        y_cur = y1;
        last_step = hs;
    }

    let n = last.len() - 1;
    let m = ((FRAC_PI_2 / (k * last_step)).round() as usize).clamp(1, n);
    let kd = discrete_wavenumber(epsilon, last_step);
    let xb = kd * window;
    let xa = kd * (window - m as f64 * last_step);
    let (ya, yb) = (last[n - m], last[n]);
    let (ma, pa) = (riccati_hankel(xa, mu, -1.0), riccati_hankel(xa, mu, 1.0));
    let (mb, pb) = (riccati_hankel(xb, mu, -1.0), riccati_hankel(xb, mu, 1.0));
    let det = ma * pb - pa * mb;
    let incoming = (ya * pb - yb * pa) / det;
    let outgoing = (ma * yb - mb * ya) / det;

    let t = (1.0 / incoming) / RESCALE_ABOVE.powi(exponent);
    let r = outgoing / incoming;
    let flux_defect = t.norm_sqr() + r.norm_sqr() - 1.0;
    debug!("eps = {epsilon}: h = {h}, window = {window}, flux defect = {flux_defect:.3e}");
    Ok(ScatteringAmplitudes {
        epsilon,
        k,
        t,
        r,
        flux_defect,
        step: h,
        window,
    })
}

/// Wavenumber of the exact Numerov solution for constant `q = k²`, so that
/// free propagation between the boundary points carries no phase error.
fn discrete_wavenumber(epsilon: f64, h: f64) -> f64 {
    let c = h * h * epsilon / 12.0;
    ((1.0 - 5.0 * c) / (1.0 + c)).acos() / h
}

/// `e^{±ix} Σⱼ (±i)ʲ aⱼ(ν)/xʲ` with `4ν² = mu`: the outgoing/incoming solution
/// of `y'' + (1 − (ν² − ¼)/x²) y = 0`. The series stops at its smallest term.
fn riccati_hankel(x: f64, mu: f64, sign: f64) -> Complex64 {
    let unit = Complex64::new(0.0, sign);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..=200 {
        let odd = f64::from(2 * j - 1);
        let next = term * unit * ((mu - odd * odd) / (8.0 * f64::from(j) * x));
        if next.norm() >= term.norm() {
            break;
        }
        sum += next;
        term = next;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum * Complex64::from_polar(1.0, sign * x)
}

/// Values at `w0 + dw` of the solutions of `y'' = −q(w) y` starting from
/// `(y, y') = (1, 0)` and `(0, 1)` at `w0`; returns `((y₁, y₁'), (y₂, y₂'))`.
fn fundamental(q: impl Fn(f64) -> f64, w0: f64, dw: f64) -> ((f64, f64), (f64, f64)) {
    let run = |mut y: f64, mut v: f64| {
        let s = dw / HANDOFF_SUBSTEPS as f64;
        for i in 0..HANDOFF_SUBSTEPS {
            let w = w0 + i as f64 * s;
            let (q0, qm, q1) = (q(w), q(w + 0.5 * s), q(w + s));
            let k1 = (v, -q0 * y);
            let k2 = (v + 0.5 * s * k1.1, -qm * (y + 0.5 * s * k1.0));
            let k3 = (v + 0.5 * s * k2.1, -qm * (y + 0.5 * s * k2.0));
            let k4 = (v + s * k3.1, -q1 * (y + s * k3.0));
            y += s / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            v += s / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        }
        (y, v)
    };
    (run(1.0, 0.0), run(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plane-wave amplitudes of a symmetric barrier `U₀` on `|w| < a`.
    fn barrier_oracle(height: f64, a: f64, eps: f64) -> (Complex64, Complex64) {
        let k = Complex64::new(eps.sqrt(), 0.0);
        let l = Complex64::new(eps - height, 0.0).sqrt();
        let i = Complex64::i();
        let s = (l * 2.0 * a).sin();
        let c = (l * 2.0 * a).cos();
        let t = (-i * k * 2.0 * a).exp() / (c - i * (k * k + l * l) / (k * l * 2.0) * s);
        let r = -i * height * s / (k * l * 2.0) * t;
        (t, r)
    }

    #[test]
    fn free_line_is_transparent() {
        let u = LinePotential::zero();
        for &eps in &[0.01, 1.0, 25.0] {
            let a = solve_scattering(&u, eps, &ScatteringNumerics::default()).unwrap();
            assert!((a.t - 1.0).norm() < 1e-8, "eps = {eps}: t = {}", a.t);
            assert!(a.r.norm() < 1e-8);
        }
    }

    #[test]
    fn hankel_functions_are_exact_for_half_integer_order() {
        // ν = 3/2: e^{ix}(1 + i/x)
        let x = 2.5;
        let got = riccati_hankel(x, 9.0, 1.0);
        let want = Complex64::from_polar(1.0, x) * Complex64::new(1.0, 1.0 / x);
        assert!((got - want).norm() < 1e-15);
    }

    #[test]
    fn hankel_series_solves_the_tail_equation() {
        let (mu, x, d) = (4.0 * 3.7 + 1.0, 40.0, 1e-3);
        let f = |x| riccati_hankel(x, mu, -1.0);
        let second = (f(x + d) - f(x) * 2.0 + f(x - d)) / (d * d);
        let residual = second + f(x) * (1.0 - 3.7 / (x * x));
        assert!(residual.norm() < 1e-5, "{residual}");
    }

    #[test]
    fn square_barrier_matches_plane_wave_solution() {
        let u = LinePotential::square_barrier(2.0, 1.0).unwrap();
        for &eps in &[0.5, 1.9, 3.0, 8.0] {
            let a = solve_scattering(&u, eps, &ScatteringNumerics::fixed(1e-3, 6.0)).unwrap();
            let (t, r) = barrier_oracle(2.0, 1.0, eps);
            assert!((a.t - t).norm() < 1e-8, "eps = {eps}: {} vs {t}", a.t);
            assert!((a.r - r).norm() < 1e-8, "eps = {eps}: {} vs {r}", a.r);
            assert!(a.flux_defect.abs() < 1e-10);
        }
    }

    #[test]
    fn barrier_convergence_is_fourth_order() {
        let u = LinePotential::square_barrier(2.0, 1.0).unwrap();
        let (t_exact, _) = barrier_oracle(2.0, 1.0, 3.0);
        let err = |h: f64| {
            let a = solve_scattering(&u, 3.0, &ScatteringNumerics::fixed(h, 5.0)).unwrap();
            (a.t - t_exact).norm()
        };
        let (e1, e2, e3) = (err(0.04), err(0.02), err(0.01));
        let p1 = (e1 / e2).log2();
        let p2 = (e2 / e3).log2();
        assert!((p1 - 4.0).abs() < 0.3 && (p2 - 4.0).abs() < 0.3, "orders {p1}, {p2}");
    }

    #[test]
    fn deep_tunnelling_does_not_overflow() {
        let u = LinePotential::square_barrier(400.0, 2.0).unwrap();
        let a = solve_scattering(&u, 1.0, &ScatteringNumerics::fixed(2e-3, 4.0)).unwrap();
        assert!(a.t.norm() < 1e-30);
        assert!((a.r.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coarse_grid_is_refused() {
        let u = LinePotential::zero();
        let e = solve_scattering(&u, 100.0, &ScatteringNumerics::fixed(0.1, 10.0)).unwrap_err();
        assert!(matches!(e, Error::Resolution { .. }));
    }

    #[test]
    fn non_positive_energy_is_refused() {
        let u = LinePotential::zero();
        assert!(solve_scattering(&u, 0.0, &ScatteringNumerics::default()).is_err());
        assert!(solve_scattering(&u, f64::NAN, &ScatteringNumerics::default()).is_err());
    }

    #[test]
    fn ellis_is_unitary_and_parity_symmetric() {
        let u = LinePotential::ellis(3, 0, 1.0).unwrap();
        for &eps in &[0.3, 1.0, 4.0] {
            let right = solve_scattering(&u, eps, &ScatteringNumerics::default()).unwrap();
            let left = solve_scattering_from(&u, eps, &ScatteringNumerics::default(), Incidence::FromLeft).unwrap();
            assert!(right.flux_defect.abs() < 1e-8);
            assert!((right.t.norm() - left.t.norm()).abs() < 1e-8);
            assert!((right.r.norm() - left.r.norm()).abs() < 1e-8);
        }
    }
}
