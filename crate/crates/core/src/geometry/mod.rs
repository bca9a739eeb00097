//! Metric radius profiles `(ds)² = dr² + R²(r) dΩ²`, the inverse map
//! geometry → potential, and the Coulomb example's isotropic coordinates and
//! Lorentz embedding.

mod embedding;
mod profile;

pub use embedding::{
    embedding_cdt_drho, embedding_profile, embedding_radicand, isotropic_rho, r_of_rho, rho_min,
    EmbeddingProfile,
};
pub use profile::{
    effective_potential_at, ellis_radius, potential_from_geometry, radius_from_superpotential,
    GeometryProfile, RadiusDerivatives, TabulatedRadius, DERIVATIVE_QUALITY_LIMIT,
};
