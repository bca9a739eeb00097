use log::warn;

use crate::error::{domain, Result};
use crate::geometry::{GeometryProfile, DERIVATIVE_QUALITY_LIMIT};
use crate::interp::MonotoneCubic;
use crate::riccati::ClosedForm;

/// Threshold on the tail-subtracted potential that defines the support.
const SUPPORT_LEVEL: f64 = 1e-10;

/// `(N+2ℓ−3)(N+2ℓ−1)/4`: large-`|w|` strength of `U ≈ c/w²` for any
/// asymptotically flat wormhole.
pub fn tail_strength(dims: u32, ell: u32) -> f64 {
    let a = f64::from(dims) + 2.0 * f64::from(ell);
    (a - 3.0) * (a - 1.0) / 4.0
}

/// Coefficient of `R₀²/R⁴` in the Ellis line potential, `−(N−1)(N−5)/4`:
/// repulsive below five dimensions, absent at five, attractive above.
pub fn ellis_quartic_coefficient(dims: u32) -> f64 {
    let n = f64::from(dims);
    -(n - 1.0) * (n - 5.0) / 4.0
}

/// Closed-form effective line potential of the N-dimensional Ellis wormhole.
pub fn ellis_line_potential(w: f64, dims: u32, ell: u32, throat: f64) -> f64 {
    let r2 = throat * throat + w * w;
    tail_strength(dims, ell) / r2 + ellis_quartic_coefficient(dims) * throat * throat / (r2 * r2)
}

/// Where the line potential comes from.
#[derive(Debug, Clone)]
pub enum LineSource {
    /// Closed form for `R² = R₀² + w²`.
    Ellis { throat: f64 },
    /// General formula applied to analytic derivatives of a closed-form profile.
    Geometry(GeometryProfile),
    /// Samples of the general formula on a tabulated profile.
    Tabulated(MonotoneCubic),
    /// `U₀` on `|w| < a`, zero outside.
    SquareBarrier { height: f64, halfwidth: f64 },
    /// Smooth user-supplied `U(w)`.
    Custom(ClosedForm),
    Zero,
}

/// Effective potential on the line `−∞ < w < ∞`.
#[derive(Debug, Clone)]
pub struct LinePotential {
    source: LineSource,
    dims: u32,
    ell: u32,
    support_halfwidth: f64,
    tail: f64,
}

impl LinePotential {
    pub fn ellis(dims: u32, ell: u32, throat: f64) -> Result<Self> {
        check_dims(dims)?;
        if !(throat > 0.0) || !throat.is_finite() {
            return domain(format!("Ellis throat must be positive, got {throat}"));
        }
        let tail = tail_strength(dims, ell);
        Ok(Self {
            source: LineSource::Ellis { throat },
            dims,
            ell,
            support_halfwidth: ellis_support(dims, ell, throat),
            tail,
        })
    }

    pub fn square_barrier(height: f64, halfwidth: f64) -> Result<Self> {
        if !height.is_finite() || !(halfwidth > 0.0) || !halfwidth.is_finite() {
            return domain("square barrier needs finite height and positive half-width");
        }
        Ok(Self {
            source: LineSource::SquareBarrier { height, halfwidth },
            dims: 1,
            ell: 0,
            support_halfwidth: halfwidth,
            tail: 0.0,
        })
    }

    pub fn zero() -> Self {
        Self {
            source: LineSource::Zero,
            dims: 1,
            ell: 0,
            support_halfwidth: 0.0,
            tail: 0.0,
        }
    }

    /// A smooth potential that is negligible beyond `support_halfwidth`
    /// and has no `1/w²` tail.
    pub fn custom(f: ClosedForm, support_halfwidth: f64) -> Result<Self> {
        if !(support_halfwidth >= 0.0) || !support_halfwidth.is_finite() {
            return domain("support half-width must be finite and >= 0");
        }
        Ok(Self {
            source: LineSource::Custom(f),
            dims: 1,
            ell: 0,
            support_halfwidth,
            tail: 0.0,
        })
    }

    pub fn source(&self) -> &LineSource {
        &self.source
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Beyond this `|w|` the potential differs from its `c/w²` tail by less
    /// than 1e-10 (in units of the inverse squared throat radius for wormholes).
    pub fn support_halfwidth(&self) -> f64 {
        self.support_halfwidth
    }

    /// Strength `c` of the `c/w²` tail that the boundary matching absorbs.
    pub fn tail_strength(&self) -> f64 {
        self.tail
    }

    /// Interval where `U` can be evaluated.
    pub fn domain(&self) -> (f64, f64) {
        match &self.source {
            LineSource::Tabulated(t) => t.domain(),
            LineSource::Geometry(g) => g.domain(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// Characteristic length over which `U` varies.
    pub fn length_scale(&self) -> f64 {
        match &self.source {
            LineSource::Ellis { throat } => *throat,
            LineSource::Geometry(GeometryProfile::Ellis { throat }) => *throat,
            LineSource::SquareBarrier { halfwidth, .. } => *halfwidth,
            LineSource::Tabulated(t) => {
                let x = t.x();
                let min_gap = x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
                (10.0 * min_gap).min(0.5 * (x[x.len() - 1] - x[0]))
            }
            _ => 1.0,
        }
    }

    /// Points where `U` jumps; the integrator puts nodes on them.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self.source {
            LineSource::SquareBarrier { halfwidth, .. } => vec![-halfwidth, halfwidth],
            _ => Vec::new(),
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self.source, LineSource::Tabulated(_) | LineSource::Custom(_))
    }

    pub fn value(&self, w: f64) -> f64 {
        let piece = self.breakpoints().iter().filter(|&&b| w > b).count();
        self.value_in_piece(w, piece)
    }

    /// `U(w)` using the smooth branch `piece` (counted left to right between
    /// breakpoints); at a breakpoint this picks the one-sided limit.
    pub fn value_in_piece(&self, w: f64, piece: usize) -> f64 {
        match &self.source {
            LineSource::Ellis { throat } => ellis_line_potential(w, self.dims, self.ell, *throat),
            LineSource::Geometry(g) => match g.derivatives_at(w) {
                Ok(d) => line_formula(d.radius, d.first, d.second, self.dims, self.ell),
                Err(_) => f64::NAN,
            },
            LineSource::Tabulated(t) => t.eval(w),
            LineSource::SquareBarrier { height, .. } => {
                if piece == 1 {
                    *height
                } else {
                    0.0
                }
            }
            LineSource::Custom(f) => f.eval(w),
            LineSource::Zero => 0.0,
        }
    }
}

fn check_dims(dims: u32) -> Result<()> {
    if dims < 2 {
        return domain(format!("dims must be >= 2, got {dims}"));
    }
    Ok(())
}

fn ellis_support(dims: u32, ell: u32, throat: f64) -> f64 {
    // U − c/w² ≈ (q − c) R₀²/w⁴ for |w| ≫ R₀
    let excess = (ellis_quartic_coefficient(dims) - tail_strength(dims, ell)).abs();
    throat * (excess / SUPPORT_LEVEL).powf(0.25).max(1.0)
}

/// `½(N−1)R''/R + ¼(N−1)(N−3)(R'/R)² + ℓ(ℓ+N−2)/R²`.
fn line_formula(radius: f64, first: f64, second: f64, dims: u32, ell: u32) -> f64 {
    let n = f64::from(dims);
    let l = f64::from(ell);
    let ratio = first / radius;
    0.5 * (n - 1.0) * second / radius
        + 0.25 * (n - 1.0) * (n - 3.0) * ratio * ratio
        + l * (l + n - 2.0) / (radius * radius)
}

/// Line potential of a full-line wormhole profile `R(w)`.
///
/// Ellis profiles keep analytic derivatives; tabulated profiles use their
/// finite-difference derivatives and are sampled once on their grid.
pub fn line_potential_from_geometry(geometry: &GeometryProfile, dims: u32, ell: u32) -> Result<LinePotential> {
    check_dims(dims)?;
    geometry.validate()?;
    let tail = tail_strength(dims, ell);
    match geometry {
        GeometryProfile::Ellis { throat } => Ok(LinePotential {
            source: LineSource::Geometry(geometry.clone()),
            dims,
            ell,
            support_halfwidth: ellis_support(dims, ell, *throat),
            tail,
        }),
        GeometryProfile::Tabulated(t) => {
            if t.derivative_quality() > DERIVATIVE_QUALITY_LIMIT {
                warn!(
                    "tabulated wormhole profile is under-resolved: second differences disagree by {:.2e}",
                    t.derivative_quality()
                );
            }
            let u: Vec<f64> = (0..t.grid().len())
                .map(|i| {
                    let d = t.derivatives_at_node(i);
                    line_formula(d.radius, d.first, d.second, dims, ell)
                })
                .collect();
            let (lo, hi) = t.domain();
            Ok(LinePotential {
                source: LineSource::Tabulated(MonotoneCubic::new(t.grid().to_vec(), u)?),
                dims,
                ell,
                support_halfwidth: lo.abs().min(hi.abs()),
                tail,
            })
        }
        GeometryProfile::ClosedFormCoulomb { .. } => {
            domain("the Coulomb geometry is radial (r > 0), not a full-line wormhole")
        }
    }
}
