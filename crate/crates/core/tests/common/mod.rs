#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;

/// Plane-wave amplitudes `(t, r)` of the barrier `U₀` on `|w| < a`, phases
/// referenced to `w = 0`.
pub fn barrier_amplitudes(height: f64, a: f64, eps: f64) -> (Complex64, Complex64) {
    let k = Complex64::new(eps.sqrt(), 0.0);
    let l = Complex64::new(eps - height, 0.0).sqrt();
    let i = Complex64::i();
    let s = (l * 2.0 * a).sin();
    let c = (l * 2.0 * a).cos();
    let t = (-i * k * 2.0 * a).exp() / (c - i * (k * k + l * l) / (k * l * 2.0) * s);
    let r = -i * height * s / (k * l * 2.0) * t;
    (t, r)
}

/// Textbook transmission probability of a rectangular barrier of width `2a`.
pub fn barrier_transmission(height: f64, a: f64, eps: f64) -> f64 {
    let width = 2.0 * a;
    let denom = 4.0 * eps * (eps - height);
    if eps > height {
        let s = ((eps - height).sqrt() * width).sin();
        1.0 / (1.0 + height * height * s * s / denom)
    } else {
        let s = ((height - eps).sqrt() * width).sinh();
        1.0 / (1.0 - height * height * s * s / denom)
    }
}

pub fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Distance in units in the last place.
pub fn ulps(a: f64, b: f64) -> u64 {
    if a == b {
        return 0;
    }
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

/// `R(r) = r(1 + 0.3 e^{−(r−2.5)²})`, a smooth bump on flat space.
pub fn bump_radius(r: f64) -> f64 {
    r * (1.0 + 0.3 * (-(r - 2.5).powi(2)).exp())
}

/// `(ln R)'` of [`bump_radius`].
pub fn bump_log_derivative(r: f64) -> f64 {
    let g = 0.3 * (-(r - 2.5).powi(2)).exp();
    1.0 / r + (-2.0 * (r - 2.5) * g) / (1.0 + g)
}
