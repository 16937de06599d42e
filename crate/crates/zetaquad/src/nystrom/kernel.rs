//! Point kernels, including the 1/(4π) constant.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, sub, SurfaceJet, Vec3};
use crate::weights::{Equation, KernelSpec, Layer};

const FOUR_PI: f64 = 4.0 * PI;

/// Radial factors shared by the three layers at distance r:
/// (e^{iκr}/(4πr), e^{iκr}(1 − iκr)/(4πr³)).
#[inline]
pub(crate) fn radial(eq: Equation, kappa: Complex64, r: f64) -> (Complex64, Complex64) {
    let inv = 1.0 / (FOUR_PI * r);
    match eq {
        Equation::Laplace => (Complex64::from(inv), Complex64::from(inv / (r * r))),
        Equation::Helmholtz => {
            let ikr = Complex64::i() * kappa * r;
            let e = ikr.exp() * inv;
            (e, e * (1.0 - ikr) / (r * r))
        }
    }
}

/// Kernel value at target x (normal n_x) from source y (normal n_y).
#[inline]
pub fn kernel_value(spec: &KernelSpec, x: &Vec3, nx: &Vec3, y: &Vec3, ny: &Vec3) -> Complex64 {
    let d = sub(x, y);
    let r = norm(&d);
    let (g, gp) = radial(spec.equation, spec.wavenumber(), r);
    match spec.layer {
        Layer::Slp => g,
        Layer::Dlp => gp * dot(&d, ny),
        Layer::Slpn => -gp * dot(&d, nx),
    }
}

/// Off-diagonal Nyström entry: kernel · J_source · h1 · h2.
pub fn kernel_eval(spec: &KernelSpec, target: &SurfaceJet, source: &SurfaceJet, h1: f64, h2: f64) -> Result<Complex64> {
    if spec.equation == Equation::Helmholtz && spec.kappa.is_none() {
        return Err(Error::MissingWavenumber);
    }
    if norm(&sub(&target.r, &source.r)) == 0.0 {
        return Err(Error::Coincident);
    }
    Ok(kernel_value(spec, &target.r, &target.n, &source.r, &source.n) * (source.jac * h1 * h2))
}
