use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Crossover between the power series and the large-argument expansion.
const SERIES_LIMIT: f64 = 15.0;

/// Modified Bessel function of the first kind `Iₙ(x)` for `n ∈ {0, 1}`, `x ≥ 0`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64> {
    check_args(order, x)?;
    if x <= SERIES_LIMIT {
        Ok(power_series(order, x))
    } else {
        // e^x overflows past ~709; the scaled form carries the magnitude
        let scaled = asymptotic_scaled(order, x);
        if x < 700.0 {
            Ok(scaled * x.exp())
        } else {
            Ok((scaled.ln() + x).exp())
        }
    }
}

/// Exponentially scaled `e^{-x} Iₙ(x)`; finite for every `x ≥ 0`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64> {
    check_args(order, x)?;
    if x <= SERIES_LIMIT {
        Ok(power_series(order, x) * (-x).exp())
    } else {
        Ok(asymptotic_scaled(order, x))
    }
}

fn check_args(order: u32, x: f64) -> Result<()> {
    if order > 1 {
        return domain(format!("bessel_i supports orders 0 and 1, got {order}"));
    }
    if !(x >= 0.0) || x.is_infinite() {
        return domain(format!("bessel_i needs finite x >= 0, got {x}"));
    }
    Ok(())
}

/// Σ (x/2)^{2k+n} / (k! (k+n)!); all terms positive so there is no cancellation.
fn power_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let n = order as f64;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + n));
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum
}

/// Hankel expansion e^{-x} Iₙ(x) ≈ (2πx)^{-1/2} Σ (-1)^k a_k(n) / x^k,
/// summed until the terms stop shrinking.
fn asymptotic_scaled(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = -term * (mu - odd * odd) / (8.0 * k * x);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        sum += next;
        term = next;
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            break;
        }
        k += 1.0;
    }
    sum / (2.0 * PI * x).sqrt()
}
