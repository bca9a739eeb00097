use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::interp::MonotoneCubic;

/// Minimum number of samples for a tabulated potential.
pub const MIN_TABULATED_POINTS: usize = 8;

/// A closed-form radial function with a label for diagnostics.
#[derive(Clone)]
pub struct ClosedForm {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl ClosedForm {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.f)(r)
    }
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedForm").field("name", &self.name).finish()
    }
}

/// Scaled radial potential `U = 2μV/ħ²` (dimension 1/length²).
#[derive(Debug, Clone)]
pub enum PotentialSpec {
    /// `κ/r + constant`; [`PotentialSpec::coulomb_plus_const`] fixes the
    /// constant to `κ²/(N-1)²`.
    CoulombPlusConst { kappa: f64, constant: f64 },
    /// `κ/r`.
    PureCoulomb { kappa: f64 },
    /// Samples on a strictly increasing grid, monotone cubic in between.
    Tabulated(MonotoneCubic),
    ClosedForm(ClosedForm),
}

impl PotentialSpec {
    pub fn coulomb_plus_const(kappa: f64, dims: u32) -> Self {
        let n1 = f64::from(dims) - 1.0;
        Self::CoulombPlusConst {
            kappa,
            constant: kappa * kappa / (n1 * n1),
        }
    }

    pub fn zero() -> Self {
        Self::ClosedForm(ClosedForm::new("zero", |_| 0.0))
    }

    pub fn closed_form(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::ClosedForm(ClosedForm::new(name, f))
    }

    pub fn tabulated(r: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if r.len() < MIN_TABULATED_POINTS {
            return domain(format!(
                "tabulated potential needs at least {MIN_TABULATED_POINTS} points, got {}",
                r.len()
            ));
        }
        Ok(Self::Tabulated(MonotoneCubic::new(r, u)?))
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Self::CoulombPlusConst { kappa, constant } => kappa / r + constant,
            Self::PureCoulomb { kappa } => kappa / r,
            Self::Tabulated(table) => table.eval(r),
            Self::ClosedForm(f) => f.eval(r),
        }
    }

    /// Interval on which the potential may be evaluated.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::Tabulated(table) => table.domain(),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn check_span(&self, r_start: f64, r_end: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        let slack = 1e-12 * (hi - lo).abs().min(1.0);
        if r_start < lo - slack || r_end > hi + slack {
            return domain(format!(
                "span [{r_start}, {r_end}] leaves the potential's domain [{lo}, {hi}]"
            ));
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match self {
            Self::CoulombPlusConst { kappa, constant } => {
                format!("coulomb_plus_const(kappa={kappa}, constant={constant})")
            }
            Self::PureCoulomb { kappa } => format!("pure_coulomb(kappa={kappa})"),
            Self::Tabulated(t) => format!("tabulated({} points)", t.x().len()),
            Self::ClosedForm(f) => format!("closed_form({})", f.name()),
        }
    }
}
