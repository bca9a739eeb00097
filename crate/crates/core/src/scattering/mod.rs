//! Scattering on the full line for the effective potential of a wormhole.
//!
//! Free motion on `(ds)² = dw² + R²(w) dΩ²` maps onto `ψ'' + (ε − U(w))ψ = 0`
//! after removing the first-derivative term with `Ψ = R^{(1−N)/2} ψ`.
//!
//! Conventions: the wave comes in from `w = +∞` (the upper branch) with unit
//! flux. The reflected amplitude `r` is the elastic channel; the transmitted
//! amplitude `t` is flux that leaves on the lower branch, i.e. absorption as
//! seen from the upper branch. Both are referenced to plane waves `e^{±ikw}`
//! at `w = 0`, so a vanishing potential gives `t = 1`, `r = 0`.

mod line;
mod numerov;
mod sweep;

pub use line::{
    ellis_line_potential, ellis_quartic_coefficient, line_potential_from_geometry,
    tail_strength, LinePotential, LineSource,
};
pub use numerov::{
    solve_scattering, solve_scattering_from, Incidence, ScatteringAmplitudes, ScatteringNumerics,
    KH_LIMIT, KH_RECOMMENDED,
};
pub use sweep::{argand_point, phase_shift_sweep, PhaseShiftRecord, ETA_FLOOR};
