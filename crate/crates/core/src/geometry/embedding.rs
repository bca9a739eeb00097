//! Isotropic coordinates and the Lorentz embedding of the Coulomb geometry
//! `R(r) = K r e^{2κr/(N−1)²}`, for repulsive `κ ≥ 0`.
//!
//! With `z = 2κρ/(K(N−1)²)` and `W = W₀(z)` the identity `W/z = e^{−W}`
//! gives `dr/dρ = e^{−W}/(K(1+W))`, which stays finite as `κ → 0` and as
//! `ρ → 0`; the closed forms with `1/(κρ)` prefactors are 0/0 there.

use crate::error::{domain, Error, Result};
use crate::specialfns::{find_root_bracketed, lambert_w0, Tolerance};

/// Sampled embedding of the Coulomb geometry over a ρ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingProfile {
    pub rho: Vec<f64>,
    pub r: Vec<f64>,
    pub dr_drho: Vec<f64>,
    pub cdt_drho: Vec<f64>,
    /// Lower edge of the real embedding; present iff `K < 1`.
    pub rho_min: Option<f64>,
}

fn check(k: f64, kappa: f64, dims: u32) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("K must be positive, got {k}"));
    }
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return domain(format!("embedding needs kappa >= 0, got {kappa}"));
    }
    if dims < 2 {
        return domain("dims must be >= 2");
    }
    Ok(())
}

fn lambert_arg(rho: f64, k: f64, kappa: f64, dims: u32) -> f64 {
    let n1 = f64::from(dims) - 1.0;
    2.0 * kappa * rho / (k * n1 * n1)
}

fn lambert_at(rho: f64, k: f64, kappa: f64, dims: u32) -> Result<f64> {
    lambert_w0(lambert_arg(rho, k, kappa, dims), Tolerance::default())
}

/// `ρ = K r e^{2κr/(N−1)²}`.
pub fn isotropic_rho(r: f64, k: f64, kappa: f64, dims: u32) -> f64 {
    let n1 = f64::from(dims) - 1.0;
    k * r * (2.0 * kappa * r / (n1 * n1)).exp()
}

/// Inverse of [`isotropic_rho`]: `r(ρ)` and `dr/dρ` through the Lambert W function.
pub fn r_of_rho(rho: f64, k: f64, kappa: f64, dims: u32) -> Result<(f64, f64)> {
    check(k, kappa, dims)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return domain(format!("rho must be finite and >= 0, got {rho}"));
    }
    if kappa == 0.0 {
        return Ok((rho / k, 1.0 / k));
    }
    let n1 = f64::from(dims) - 1.0;
    let w = lambert_at(rho, k, kappa, dims)?;
    let r = n1 * n1 / (2.0 * kappa) * w;
    Ok((r, (-w).exp() / (k * (1.0 + w))))
}

/// Radicand `(1+W)² − ((N−1)² W/(2κρ))²` of the embedding's time component;
/// negative where the embedding is complex.
pub fn embedding_radicand(rho: f64, k: f64, kappa: f64, dims: u32) -> Result<f64> {
    check(k, kappa, dims)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return domain(format!("rho must be finite and >= 0, got {rho}"));
    }
    let w = if kappa == 0.0 {
        0.0
    } else {
        lambert_at(rho, k, kappa, dims)?
    };
    let ratio = (-w).exp() / k;
    Ok((1.0 + w).powi(2) - ratio * ratio)
}

/// `c dt/dρ = √radicand / (1 + W)`. Fails with [`Error::ComplexEmbedding`]
/// below `ρ_min`.
pub fn embedding_cdt_drho(rho: f64, k: f64, kappa: f64, dims: u32) -> Result<f64> {
    let radicand = embedding_radicand(rho, k, kappa, dims)?;
    let w = if kappa == 0.0 {
        0.0
    } else {
        lambert_at(rho, k, kappa, dims)?
    };
    let scale = (1.0 + w).powi(2);
    if radicand < 0.0 {
        // roundoff right at the root is not a complex embedding
        if radicand >= -4.0 * f64::EPSILON * scale {
            return Ok(0.0);
        }
        return Err(Error::ComplexEmbedding { rho, radicand });
    }
    Ok(radicand.sqrt() / (1.0 + w))
}

/// Smallest ρ with a real embedding when `0 < K < 1`: the positive root of
/// the radicand, bracketed between 0 and a doubling search.
pub fn rho_min(k: f64, kappa: f64, dims: u32, tol: Tolerance) -> Result<f64> {
    check(k, kappa, dims)?;
    if k >= 1.0 {
        return domain(format!("rho_min exists only for K < 1, got {k}"));
    }
    if kappa == 0.0 {
        return domain("with kappa = 0 and K < 1 the embedding is nowhere real");
    }
    let f = |rho: f64| embedding_radicand(rho, k, kappa, dims).unwrap_or(f64::NAN);
    let n1 = f64::from(dims) - 1.0;
    let mut hi = k * n1 * n1 / (2.0 * kappa);
    let mut tries = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 1100 || !hi.is_finite() {
            let fhi = f(hi);
            return Err(Error::Bracket {
                a: 0.0,
                b: hi,
                fa: f(0.0),
                fb: fhi,
            });
        }
    }
    let root = find_root_bracketed(f, 0.0, hi, tol)?;
    Ok(root)
}

/// Log-spaced embedding samples on `[ρ_lo, ρ_hi]`. For `K < 1` the grid starts
/// at `max(ρ_lo, ρ_min)`, so the first row sits at `ρ_min` whenever the
/// requested range reaches below it.
pub fn embedding_profile(
    k: f64,
    kappa: f64,
    dims: u32,
    rho_range: (f64, f64),
    count: usize,
    tol: Tolerance,
) -> Result<EmbeddingProfile> {
    check(k, kappa, dims)?;
    let (mut lo, hi) = rho_range;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return domain(format!("rho range must satisfy 0 < lo < hi, got [{lo}, {hi}]"));
    }
    if count < 2 {
        return domain("embedding grid needs at least two points");
    }
    let rmin = if k < 1.0 {
        let m = rho_min(k, kappa, dims, tol)?;
        if m >= hi {
            return domain(format!("rho_min = {m} lies above the requested range"));
        }
        lo = lo.max(m);
        Some(m)
    } else {
        None
    };
    let ratio = (hi / lo).ln();
    let mut out = EmbeddingProfile {
        rho: Vec::with_capacity(count),
        r: Vec::with_capacity(count),
        dr_drho: Vec::with_capacity(count),
        cdt_drho: Vec::with_capacity(count),
        rho_min: rmin,
    };
    for i in 0..count {
        let rho = if i + 1 == count {
            hi
        } else {
            lo * (ratio * i as f64 / (count - 1) as f64).exp()
        };
        let (r, dr) = r_of_rho(rho, k, kappa, dims)?;
        out.rho.push(rho);
        out.r.push(r);
        out.dr_drho.push(dr);
        out.cdt_drho.push(embedding_cdt_drho(rho, k, kappa, dims)?);
    }
    Ok(out)
}
