use thiserror::Error;

/// Errors raised by the quadrature library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadratic form is not positive definite: E={e}, F={f}, G={g}")]
    NotPositiveDefinite { e: f64, f: f64, g: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of the Epstein zeta function at s = {0}")]
    Pole(f64),
    #[error("unsupported argument: {0}")]
    Unsupported(String),
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("a wavenumber is required for Helmholtz kernels")]
    MissingWavenumber,
    #[error("order-5 corrections need an isotropic grid (h1 = {h1}, h2 = {h2})")]
    Anisotropic { h1: f64, h2: f64 },
    #[error("grid too coarse: {0}")]
    Resolution(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("coincident target and source")]
    Coincident,
    #[error("integrand is not integrable at the origin (homogeneity degree {0})")]
    Divergent(i32),
    #[error("ill-posed problem: {0}")]
    IllPosed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
