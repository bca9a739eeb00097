//! Special functions and root finding shared by the other modules.
//!
//! Everything here is a pure function of its inputs.

mod bessel;
mod lambert;
mod roots;

pub use bessel::{bessel_i, bessel_i_scaled};
pub use lambert::lambert_w0;
pub use roots::find_root_bracketed;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Convergence controls for iterative routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        let tol = Self {
            abs_tol,
            rel_tol,
            max_iter,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return domain(format!("abs_tol must be positive, got {}", self.abs_tol));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return domain(format!("rel_tol must be positive, got {}", self.rel_tol));
        }
        if self.max_iter == 0 {
            return domain("max_iter must be at least 1");
        }
        Ok(())
    }

    /// Same iteration budget with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_iter: self.max_iter,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_iter: 200,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_rejects_bad_fields() {
        assert!(Tolerance::new(0.0, 1e-8, 10).is_err());
        assert!(Tolerance::new(1e-8, -1.0, 10).is_err());
        assert!(Tolerance::new(1e-8, 1e-8, 0).is_err());
        assert!(Tolerance::new(1e-8, 1e-8, 1).is_ok());
    }
}
