use super::ModelParams;
use crate::error::{domain, Result};
use crate::specialfns::bessel_i_scaled;

/// Below this value of κr the Bessel-ratio solution is replaced by its series.
pub const SMALL_ARGUMENT_CUTOFF: f64 = 1e-8;

/// Rational solution `(N−1)/(2r) + κ/(N−1)` for `U = κ/r + κ²/(N−1)²`, ℓ = 0.
pub fn closed_form_coulomb_plus_const(r: f64, p: &ModelParams) -> Result<f64> {
    check_radius(r)?;
    let n1 = f64::from(p.dims) - 1.0;
    Ok(n1 / (2.0 * r) + p.kappa / n1)
}

/// Analytic `dW/dr` of [`closed_form_coulomb_plus_const`].
pub fn closed_form_coulomb_plus_const_derivative(r: f64, p: &ModelParams) -> Result<f64> {
    check_radius(r)?;
    let n1 = f64::from(p.dims) - 1.0;
    Ok(-n1 / (2.0 * r * r))
}

/// Three-dimensional pure-Coulomb solution of `W' + W² = κ/r`:
/// `√(κ/r) I₀(2√(κr)) / I₁(2√(κr))`.
///
/// For `κr < 1e-8` the series `1/r + κ/2 − κ²r/12` is returned instead.
pub fn closed_form_coulomb_3d(r: f64, kappa: f64) -> Result<f64> {
    check_coulomb_3d(r, kappa)?;
    if kappa * r < SMALL_ARGUMENT_CUTOFF {
        return Ok(1.0 / r + 0.5 * kappa - kappa * kappa * r / 12.0);
    }
    let x = 2.0 * (kappa * r).sqrt();
    Ok((kappa / r).sqrt() * bessel_ratio(x)?)
}

/// Analytic `dW/dr` of [`closed_form_coulomb_3d`] through `I₀' = I₁`,
/// `I₁' = I₀ − I₁/x`. It does not use the differential equation itself.
pub fn closed_form_coulomb_3d_derivative(r: f64, kappa: f64) -> Result<f64> {
    check_coulomb_3d(r, kappa)?;
    if kappa * r < SMALL_ARGUMENT_CUTOFF {
        return Ok(-1.0 / (r * r) - kappa * kappa / 12.0);
    }
    let x = 2.0 * (kappa * r).sqrt();
    let q = bessel_ratio(x)?;
    let sqrt_kr = (kappa / r).sqrt();
    // dQ/dx = 1 − Q² + Q/x and dx/dr = √(κ/r)
    let dq_dx = 1.0 - q * q + q / x;
    Ok(-0.5 * sqrt_kr / r * q + sqrt_kr * sqrt_kr * dq_dx)
}

fn bessel_ratio(x: f64) -> Result<f64> {
    Ok(bessel_i_scaled(0, x)? / bessel_i_scaled(1, x)?)
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("closed forms need r > 0, got {r}"));
    }
    Ok(())
}

fn check_coulomb_3d(r: f64, kappa: f64) -> Result<()> {
    check_radius(r)?;
    if !(kappa > 0.0) || !kappa.is_finite() {
        return domain(format!("the Bessel-ratio solution needs kappa > 0, got {kappa}"));
    }
    Ok(())
}
