//! Single-target quadrature over a non-periodic patch: the corrected rule at
//! the node (0, 0) of a uniform grid on [−1, 1]².

use num_complex::Complex64;

use super::kernel::kernel_value;
use crate::error::{Error, Result};
use crate::geometry::{l_coeffs, Surface};
use crate::weights::{d_quantities_from, solve_stencil, tau_oh3, KernelSpec, Order};
use crate::zeta::ZetaBundle;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// σ(u,v) = −(a cos(a+u) + b sin(b+v)) e^{−c(u²+v²)⁴}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchDensity {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for PatchDensity {
    fn default() -> Self {
        PatchDensity { a: 0.809, b: -0.221, c: 640.0 }
    }
}

impl PatchDensity {
    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let q = u * u + v * v;
        -(self.a * (self.a + u).cos() + self.b * (self.b + v).sin()) * (-self.c * q * q * q * q).exp()
    }
}

/// Corrected (or, with `corrected = false`, punctured) trapezoidal value of
/// the layer potential at the patch center, h = 2/n, nodes ih for |i| ≤ n/2.
pub fn patch_quadrature(
    surface: &dyn Surface,
    spec: &KernelSpec,
    order: Order,
    n: usize,
    density: &dyn Fn(f64, f64) -> f64,
    corrected: bool,
) -> Result<Complex64> {
    if n < 8 || n % 2 == 1 {
        return Err(Error::Resolution(format!("patch grid needs an even n ≥ 8, got {n}")));
    }
    let h = 2.0 / n as f64;
    let m = (n / 2) as i64;
    let center = surface.jet(0.0, 0.0)?;
    let mut acc = Complex64::default();
    for i in -m..=m {
        for j in -m..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let (u, v) = (i as f64 * h, j as f64 * h);
            let s = density(u, v);
            if s == 0.0 {
                continue;
            }
            let jet = surface.jet(u, v)?;
            acc += kernel_value(spec, &center.r, &center.n, &jet.r, &jet.n) * (s * jet.jac * h * h);
        }
    }
    if !corrected {
        return Ok(acc);
    }
    let stencil = match order {
        Order::Three => {
            let w = tau_oh3(spec, &center, h, h)?;
            return Ok(acc + w * density(0.0, 0.0) * center.jac / FOUR_PI);
        }
        Order::Five => {
            let bundle = ZetaBundle::new(&center.first, -1.0)?;
            solve_stencil(&d_quantities_from(spec, &l_coeffs(&center), &bundle, h)?)
        }
    };
    let st = stencil.to_density_jacobian(|a, b| surface.jet(a as f64 * h, b as f64 * h).map(|j| j.jac).unwrap_or(f64::NAN));
    for (&(a, b), w) in st.offsets.iter().zip(&st.weights) {
        let (u, v) = (a as f64 * h, b as f64 * h);
        acc += w * density(u, v) * surface.jet(u, v)?.jac / FOUR_PI;
    }
    Ok(acc)
}
