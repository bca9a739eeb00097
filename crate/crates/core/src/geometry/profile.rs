use log::warn;

use crate::error::{domain, Result};
use crate::interp::MonotoneCubic;
use crate::riccati::{PotentialSpec, SuperpotentialSolution, MIN_TABULATED_POINTS};
use crate::stencil::{grid_derivatives, second_derivative_low_order, STENCIL_POINTS};

/// Relative disagreement between 5- and 3-point second differences above
/// which a tabulated radius is reported as too coarse.
pub const DERIVATIVE_QUALITY_LIMIT: f64 = 1e-2;

/// `R` and its first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusDerivatives {
    pub radius: f64,
    pub first: f64,
    pub second: f64,
}

impl RadiusDerivatives {
    /// `(ln R)'` and `(ln R)''`.
    pub fn log_derivatives(&self) -> (f64, f64) {
        let l1 = self.first / self.radius;
        (l1, self.second / self.radius - l1 * l1)
    }
}

/// Sampled metric radius with finite-difference derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedRadius {
    r: Vec<f64>,
    radius: Vec<f64>,
    first: Vec<f64>,
    second: Vec<f64>,
    low_confidence: Vec<bool>,
    quality: f64,
}

impl TabulatedRadius {
    /// Needs a strictly increasing grid with at least five points and `R > 0`.
    pub fn new(r: Vec<f64>, radius: Vec<f64>) -> Result<Self> {
        if r.len() != radius.len() {
            return domain("radius grid and values differ in length");
        }
        if r.len() < STENCIL_POINTS {
            return domain(format!("tabulated radius needs at least {STENCIL_POINTS} points"));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("radius grid must be strictly increasing");
        }
        if radius.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return domain("metric radius must be positive and finite");
        }
        let d = grid_derivatives(&r, &radius);
        let scale = d.second.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let quality = if scale == 0.0 {
            0.0
        } else {
            (1..r.len() - 1)
                .filter(|&i| !d.one_sided[i])
                .map(|i| (d.second[i] - second_derivative_low_order(&r, &radius, i)).abs() / scale)
                .fold(0.0, f64::max)
        };
        Ok(Self {
            r,
            radius,
            first: d.first,
            second: d.second,
            low_confidence: d.one_sided,
            quality,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.radius
    }

    pub fn first_derivative(&self) -> &[f64] {
        &self.first
    }

    pub fn second_derivative(&self) -> &[f64] {
        &self.second
    }

    /// Samples whose derivatives came from one-sided stencils.
    pub fn low_confidence(&self) -> &[bool] {
        &self.low_confidence
    }

    /// Largest relative gap between the 5-point and 3-point `R''`; large values
    /// mean the grid under-resolves the curvature.
    pub fn derivative_quality(&self) -> f64 {
        self.quality
    }

    pub fn derivatives_at_node(&self, i: usize) -> RadiusDerivatives {
        RadiusDerivatives {
            radius: self.radius[i],
            first: self.first[i],
            second: self.second[i],
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.r[0], self.r[self.r.len() - 1])
    }
}

/// Radius function `R` of a rotationally symmetric metric.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometryProfile {
    /// `R = K r e^{2κr/(N−1)²}`, the geometry of the rational Coulomb solution.
    ClosedFormCoulomb { k: f64, kappa: f64, dims: u32 },
    /// `R = √(R₀² + w²)` on the whole line.
    Ellis { throat: f64 },
    Tabulated(TabulatedRadius),
}

impl GeometryProfile {
    pub fn flat() -> Self {
        Self::ClosedFormCoulomb {
            k: 1.0,
            kappa: 0.0,
            dims: 3,
        }
    }

    /// `K = (R₀/r₀) e^{−2κr₀/(N−1)²}` for the Coulomb geometry anchored at `(r₀, R₀)`.
    pub fn coulomb_from_anchor(r0: f64, radius0: f64, kappa: f64, dims: u32) -> Self {
        let n1 = f64::from(dims) - 1.0;
        Self::ClosedFormCoulomb {
            k: radius0 / r0 * (-2.0 * kappa * r0 / (n1 * n1)).exp(),
            kappa,
            dims,
        }
    }

    pub fn tabulated(r: Vec<f64>, radius: Vec<f64>) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedRadius::new(r, radius)?))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::ClosedFormCoulomb { k, kappa, dims } => {
                if !(k > 0.0) || !kappa.is_finite() || dims < 2 {
                    return domain("Coulomb geometry needs K > 0, finite kappa and N >= 2");
                }
            }
            Self::Ellis { throat } => {
                if !(throat > 0.0) || !throat.is_finite() {
                    return domain("Ellis throat radius must be positive");
                }
            }
            Self::Tabulated(_) => {}
        }
        Ok(())
    }

    /// Where `R` (and its derivatives) may be evaluated.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::ClosedFormCoulomb { .. } => (0.0, f64::INFINITY),
            Self::Ellis { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Self::Tabulated(t) => t.domain(),
        }
    }

    /// `R`, `R'`, `R''` at `x`; tabulated profiles interpolate the sampled
    /// derivatives with monotone cubics.
    pub fn derivatives_at(&self, x: f64) -> Result<RadiusDerivatives> {
        match *self {
            Self::ClosedFormCoulomb { k, kappa, dims } => {
                if !(x > 0.0) {
                    return domain(format!("Coulomb geometry is defined for r > 0, got {x}"));
                }
                let n1 = f64::from(dims) - 1.0;
                let a = 2.0 * kappa / (n1 * n1);
                let radius = k * x * (a * x).exp();
                Ok(RadiusDerivatives {
                    radius,
                    first: radius * (1.0 / x + a),
                    second: radius * (2.0 * a / x + a * a),
                })
            }
            Self::Ellis { throat } => {
                let radius = ellis_radius(x, throat);
                Ok(RadiusDerivatives {
                    radius,
                    first: x / radius,
                    second: throat * throat / radius.powi(3),
                })
            }
            Self::Tabulated(ref t) => {
                let (lo, hi) = t.domain();
                if x < lo || x > hi {
                    return domain(format!("{x} is outside the tabulated range [{lo}, {hi}]"));
                }
                if let Ok(i) = t.r.binary_search_by(|v| v.total_cmp(&x)) {
                    return Ok(t.derivatives_at_node(i));
                }
                let interp = |v: &[f64]| -> Result<f64> {
                    Ok(MonotoneCubic::new(t.r.clone(), v.to_vec())?.eval(x))
                };
                Ok(RadiusDerivatives {
                    radius: interp(&t.radius)?,
                    first: interp(&t.first)?,
                    second: interp(&t.second)?,
                })
            }
        }
    }

    pub fn radius(&self, x: f64) -> Result<f64> {
        Ok(self.derivatives_at(x)?.radius)
    }
}

/// `√(R₀² + w²)`.
pub fn ellis_radius(w: f64, throat: f64) -> f64 {
    throat.hypot(w)
}

/// `R(r) = R₀ exp(2S(r)/(N−1))` on the solution grid.
pub fn radius_from_superpotential(sol: &SuperpotentialSolution) -> Result<GeometryProfile> {
    sol.params.validate()?;
    let n1 = f64::from(sol.params.dims) - 1.0;
    let radius: Vec<f64> = sol
        .s
        .iter()
        .map(|&s| sol.params.radius_anchor * (2.0 * s / n1).exp())
        .collect();
    GeometryProfile::tabulated(sol.r.clone(), radius)
}

/// Flat-space potential for angular momentum `ell` reproducing free motion
/// on `geometry`, evaluated at `r > 0`.
pub fn effective_potential_at(geometry: &GeometryProfile, dims: u32, ell: u32, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("the effective potential is singular at r = {r}"));
    }
    let d = geometry.derivatives_at(r)?;
    Ok(potential_formula(&d, dims, ell, r))
}

fn potential_formula(d: &RadiusDerivatives, dims: u32, ell: u32, r: f64) -> f64 {
    let n = f64::from(dims);
    let l = f64::from(ell);
    let half = 0.5 * (n - 1.0);
    let (l1, l2) = d.log_derivatives();
    let centrifugal = (l + half) * (l + 0.5 * (n - 3.0));
    half * l2 + half * half * l1 * l1 + l * (l + n - 2.0) / (d.radius * d.radius)
        - centrifugal / (r * r)
}

/// Inverse map geometry → potential.
///
/// Closed-form profiles give a closed-form potential on `r > 0`; tabulated
/// profiles give a tabulated potential on the same grid (which must then lie
/// in `r > 0`). A coarse tabulated grid is reported through `log::warn!`.
pub fn potential_from_geometry(geometry: &GeometryProfile, dims: u32, ell: u32) -> Result<PotentialSpec> {
    geometry.validate()?;
    if dims < 2 {
        return domain("dims must be >= 2");
    }
    match geometry {
        GeometryProfile::Tabulated(t) => {
            if t.r[0] <= 0.0 {
                return domain("tabulated geometry must lie in r > 0");
            }
            if t.r.len() < MIN_TABULATED_POINTS {
                return domain(format!(
                    "tabulated geometry needs at least {MIN_TABULATED_POINTS} points"
                ));
            }
            if t.quality > DERIVATIVE_QUALITY_LIMIT {
                warn!(
                    "tabulated radius is under-resolved: second differences disagree by {:.2e}",
                    t.quality
                );
            }
            let u = (0..t.r.len())
                .map(|i| potential_formula(&t.derivatives_at_node(i), dims, ell, t.r[i]))
                .collect();
            PotentialSpec::tabulated(t.r.clone(), u)
        }
        closed => {
            let g = closed.clone();
            let name = format!("geometry_potential(N={dims}, l={ell}, {g:?})");
            Ok(PotentialSpec::closed_form(name, move |r| {
                effective_potential_at(&g, dims, ell, r).unwrap_or(f64::NAN)
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riccati::{ModelParams, PotentialSpec};

    #[test]
    fn flat_space_is_potential_free() {
        for dims in 2..=6 {
            for ell in 0..4 {
                for &r in &[0.1, 1.0, 3.7, 50.0] {
                    let u = effective_potential_at(&GeometryProfile::flat(), dims, ell, r).unwrap();
                    assert!(u.abs() <= 1e-10 * (1.0 + 1.0 / (r * r)), "N={dims} l={ell} r={r}: {u}");
                }
            }
        }
    }

    #[test]
    fn coulomb_geometry_inverts_to_coulomb_potential() {
        for dims in [2, 3, 4, 6] {
            for kappa in [0.0, 1.0, 3.0] {
                let g = GeometryProfile::ClosedFormCoulomb { k: 0.7, kappa, dims };
                let n1 = f64::from(dims) - 1.0;
                for &r in &[0.05, 0.5, 2.0, 9.0] {
                    let u = effective_potential_at(&g, dims, 0, r).unwrap();
                    let expect = kappa / r + kappa * kappa / (n1 * n1);
                    assert!((u - expect).abs() <= 1e-10 * (1.0 + expect.abs() + 1.0 / (r * r)));
                }
            }
        }
    }

    #[test]
    fn two_dimensional_sampled_profile_matches_symbolic_value() {
        // N = 2, m = 1; reference values from symbolic differentiation.
        // R = r(1 + 0.1 r²) happens to give U ≡ 0 for m = 1.
        let r: Vec<f64> = (0..=400).map(|i| 0.5 + i as f64 * 0.005).collect();
        let cubic: Vec<f64> = r.iter().map(|&x| x * (1.0 + 0.1 * x * x)).collect();
        let u = potential_from_geometry(&GeometryProfile::tabulated(r.clone(), cubic).unwrap(), 2, 1).unwrap();
        assert!(u.value(1.0).abs() < 1e-8);
        assert!(u.value(2.0).abs() < 1e-8);

        let gauss: Vec<f64> = r.iter().map(|&x| x * (0.1 * x * x).exp()).collect();
        let u = potential_from_geometry(&GeometryProfile::tabulated(r, gauss).unwrap(), 2, 1).unwrap();
        assert!((u.value(1.0) - 0.028_730_753_077_981_86).abs() < 1e-8);
        assert!((u.value(2.0) - 0.102_332_241_029_305_4).abs() < 1e-8);
    }

    #[test]
    fn superpotential_to_radius() {
        let p = ModelParams::new(3, 0, 1.0, 1.0, 0.0).unwrap();
        let r: Vec<f64> = (1..=50).map(|i| 0.1 * i as f64).collect();
        let w: Vec<f64> = r.iter().map(|x| 1.0 / x).collect();
        let s: Vec<f64> = r.iter().map(|x| x.ln()).collect();
        let sol = crate::riccati::SuperpotentialSolution::from_samples(r.clone(), w, s, p, &PotentialSpec::zero())
            .unwrap();
        let g = radius_from_superpotential(&sol).unwrap();
        for &x in &r {
            assert!((g.radius(x).unwrap() - x).abs() < 1e-13);
        }
        assert_eq!(g.radius(1.0).unwrap(), 1.0);
    }

    #[test]
    fn ellis_radius_basics() {
        assert_eq!(ellis_radius(0.0, 2.5), 2.5);
        assert_eq!(ellis_radius(3.0, 4.0), 5.0);
        assert_eq!(ellis_radius(-1.7, 0.3), ellis_radius(1.7, 0.3));
        for &w in &[10.0, 1e3, 1e6] {
            let r = ellis_radius(w, 1.3);
            assert!(((r * r - w * w) - 1.69).abs() <= 1e-12 * w * w);
        }
    }

    #[test]
    fn potential_rejects_origin_and_bad_profiles() {
        assert!(effective_potential_at(&GeometryProfile::flat(), 3, 0, 0.0).is_err());
        assert!(GeometryProfile::tabulated(vec![1.0, 2.0, 3.0, 4.0, 5.0], vec![1.0, -1.0, 1.0, 1.0, 1.0]).is_err());
        assert!(potential_from_geometry(&GeometryProfile::Ellis { throat: 0.0 }, 3, 0).is_err());
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let r: Vec<f64> = (0..8).map(|i| 0.5 + i as f64).collect();
        let radius: Vec<f64> = r.iter().map(|&x| x * (1.0 + (3.0 * x).sin().powi(2))).collect();
        let t = TabulatedRadius::new(r, radius).unwrap();
        assert!(t.derivative_quality() > DERIVATIVE_QUALITY_LIMIT);
        assert!(t.low_confidence()[0] && !t.low_confidence()[3]);
    }
}
