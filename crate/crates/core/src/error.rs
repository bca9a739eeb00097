use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("root not bracketed on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    Bracket { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("solution blew up near r = {r} (W = {w}); the Riccati solution has a pole there")]
    Blowup { r: f64, w: f64 },

    #[error("step size underflow at r = {r}; requested tolerance cannot be met")]
    StepSizeUnderflow { r: f64 },

    #[error("embedding is complex at rho = {rho} (radicand = {radicand})")]
    ComplexEmbedding { rho: f64, radicand: f64 },

    #[error("grid does not resolve the wavelength: k*h = {kh} exceeds {limit}")]
    Resolution { kh: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
