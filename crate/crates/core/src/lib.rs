//! Numerical toolkit for the equivalence between flat-space radial potentials
//! and free motion on curved, rotationally symmetric manifolds.
//!
//! * [`specialfns`]: Lambert W, modified Bessel functions, bracketed roots.
//! * [`riccati`]: potential to superpotential through the modified Riccati
//!   equation, plus the Coulomb closed forms.
//! * [`geometry`]: metric radius profiles, the inverse map geometry to
//!   potential, isotropic coordinates and the Lorentz embedding.
//! * [`scattering`]: effective line potential of a wormhole and Numerov
//!   scattering on the full line.
//! * [`cli`]: configuration and file emitters behind the `geodual` binary.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod riccati;
pub mod scattering;
pub mod specialfns;
pub mod stencil;

pub use error::{Error, Result};
pub use specialfns::Tolerance;
