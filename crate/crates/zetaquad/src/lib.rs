//! Locally corrected trapezoidal rules for weakly singular layer potentials.
//!
//! The punctured trapezoidal rule on a uniform parameter grid is corrected at
//! a handful of nodes around each singular point. The correction weights are
//! Wigner-type limits, which reduce to values and parametric derivatives of
//! the two-dimensional Epstein zeta function of the local first fundamental
//! form.
//!
//! * [`zeta`] — Epstein zeta values, parametric derivatives, lattice oracles.
//! * [`geometry`] — parametric surfaces, per-node jets, expansion coefficients.
//! * [`weights`] — O(h³) and O(h⁵) correction stencils for six kernels.
//! * [`nystrom`] — operators, GMRES, boundary value problems, patch tests.

pub mod error;
pub mod geometry;
pub mod nystrom;
pub mod weights;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
