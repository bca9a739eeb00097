//! Potential → superpotential through the modified Riccati equation
//!
//! ```text
//! W' + W² + ℓ(ℓ+N−2)/R₀² · exp(4/(1−N) ∫_{r₀}^r W) = U + (ℓ+(N−1)/2)(ℓ+(N−3)/2)/r²
//! ```
//!
//! The integral is carried as a second state `S' = W`, which turns the
//! integro-differential equation into a first-order system for `(W, S)`.
//! The general solution is a one-parameter family; the seed `W(r_start)`
//! selects the member (and with it the geometry).

mod closed_form;
mod potential;
mod solver;

pub use closed_form::{
    closed_form_coulomb_3d, closed_form_coulomb_3d_derivative, closed_form_coulomb_plus_const,
    closed_form_coulomb_plus_const_derivative, SMALL_ARGUMENT_CUTOFF,
};
pub use potential::{ClosedForm, PotentialSpec, MIN_TABULATED_POINTS};
pub use solver::{solve_modified_riccati, solve_modified_riccati_with, RiccatiOptions};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specialfns::Tolerance;
use crate::stencil::grid_derivatives;

/// Physical parameters shared by the Riccati and geometry computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Number of spatial dimensions N.
    pub dims: u32,
    /// Angular momentum ℓ (|m| in two dimensions).
    pub ell: u32,
    /// Metric radius R₀ at the anchor point.
    #[serde(alias = "R0")]
    pub radius_anchor: f64,
    /// Anchor radius r₀ where `S = ∫_{r₀} W` vanishes.
    #[serde(alias = "r0")]
    pub r_anchor: f64,
    /// Coulomb strength κ used by the closed forms.
    #[serde(default)]
    pub kappa: f64,
}

impl ModelParams {
    pub fn new(dims: u32, ell: u32, radius_anchor: f64, r_anchor: f64, kappa: f64) -> Result<Self> {
        let p = Self {
            dims,
            ell,
            radius_anchor,
            r_anchor,
            kappa,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims < 2 {
            return domain(format!("dims must be >= 2, got {}", self.dims));
        }
        if !(self.radius_anchor > 0.0 && self.radius_anchor.is_finite()) {
            return domain(format!("R0 must be positive, got {}", self.radius_anchor));
        }
        if !(self.r_anchor > 0.0 && self.r_anchor.is_finite()) {
            return domain(format!("r0 must be positive, got {}", self.r_anchor));
        }
        if !self.kappa.is_finite() {
            return domain("kappa must be finite");
        }
        Ok(())
    }

    /// `(ℓ + (N−1)/2)(ℓ + (N−3)/2)`, the flat-space centrifugal numerator.
    pub fn centrifugal(&self) -> f64 {
        let l = f64::from(self.ell);
        let n = f64::from(self.dims);
        (l + 0.5 * (n - 1.0)) * (l + 0.5 * (n - 3.0))
    }

    /// `ℓ(ℓ+N−2)`, the eigenvalue of L² on the sphere.
    pub fn casimir(&self) -> f64 {
        let l = f64::from(self.ell);
        l * (l + f64::from(self.dims) - 2.0)
    }

    /// `ℓ(ℓ+N−2)/R₀²`.
    pub fn angular_strength(&self) -> f64 {
        self.casimir() / (self.radius_anchor * self.radius_anchor)
    }

    /// `4/(1−N)`.
    pub fn memory_exponent(&self) -> f64 {
        4.0 / (1.0 - f64::from(self.dims))
    }
}

/// Superpotential samples with `S(r) = ∫_{r₀}^r W`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpotentialSolution {
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub s: Vec<f64>,
    pub params: ModelParams,
    /// Re-substitution residual, see [`riccati_residual`].
    pub max_residual: f64,
    /// Tolerances the samples were produced with, if they came from the solver.
    pub tolerance: Option<Tolerance>,
}

impl SuperpotentialSolution {
    /// Wraps externally produced samples and measures their residual against `potential`.
    pub fn from_samples(
        r: Vec<f64>,
        w: Vec<f64>,
        s: Vec<f64>,
        params: ModelParams,
        potential: &PotentialSpec,
    ) -> Result<Self> {
        params.validate()?;
        if r.len() != w.len() || r.len() != s.len() {
            return domain("solution grids differ in length");
        }
        if r.len() < crate::stencil::STENCIL_POINTS {
            return domain("solution needs at least five samples");
        }
        if r.windows(2).any(|p| !(p[1] > p[0])) || r[0] <= 0.0 {
            return domain("solution grid must be positive and strictly increasing");
        }
        let mut sol = Self {
            r,
            w,
            s,
            params,
            max_residual: f64::NAN,
            tolerance: None,
        };
        sol.max_residual = riccati_residual(&sol, potential);
        Ok(sol)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }
}

#[inline]
pub(crate) fn rhs_unchecked(r: f64, w: f64, s: f64, u: f64, p: &ModelParams) -> f64 {
    let angular = p.angular_strength();
    let memory = if angular == 0.0 {
        0.0
    } else {
        angular * (p.memory_exponent() * s).exp()
    };
    u + p.centrifugal() / (r * r) - w * w - memory
}

/// `dW/dr` of the modified Riccati equation at `(r, W, S)` with `U(r) = u_at_r`.
pub fn riccati_rhs(r: f64, w: f64, s: f64, u_at_r: f64, p: &ModelParams) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("riccati_rhs needs r > 0, got {r}"));
    }
    Ok(rhs_unchecked(r, w, s, u_at_r, p))
}

/// Pointwise defect `|W' − rhs|` with `W'` from 5-point finite differences
/// on the solution grid. Edge points use one-sided stencils.
pub fn residual_profile(sol: &SuperpotentialSolution, potential: &PotentialSpec) -> Vec<f64> {
    if sol.r.len() < crate::stencil::STENCIL_POINTS {
        return vec![f64::NAN; sol.r.len()];
    }
    let d = grid_derivatives(&sol.r, &sol.w);
    sol.r
        .iter()
        .zip(&sol.w)
        .zip(&sol.s)
        .zip(&d.first)
        .map(|(((&r, &w), &s), &dw)| {
            (dw - rhs_unchecked(r, w, s, potential.value(r), &sol.params)).abs()
        })
        .collect()
}

/// Maximum of [`residual_profile`] over interior (centred-stencil) points.
pub fn riccati_residual(sol: &SuperpotentialSolution, potential: &PotentialSpec) -> f64 {
    let n = sol.r.len();
    if n < crate::stencil::STENCIL_POINTS {
        return f64::NAN;
    }
    let profile = residual_profile(sol, potential);
    profile[2..n - 2].iter().copied().fold(0.0, f64::max)
}

/// Flat-space seed `(N−1)/(2r)`, i.e. `R ∝ r`.
pub fn flat_seed(r: f64, dims: u32) -> f64 {
    0.5 * (f64::from(dims) - 1.0) / r
}
