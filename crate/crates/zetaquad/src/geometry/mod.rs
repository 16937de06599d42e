//! Parametric surfaces with analytic derivatives, per-node jets, and the
//! expansion coefficients consumed by the correction weights.

mod lcoeffs;

use crate::error::{Error, Result};
use crate::zeta::{DerivDirection, QuadraticForm};

pub use lcoeffs::{conv, l_coeffs, LCoeffs};

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Position, partial derivatives through order four, and derived
/// first-order quantities at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceJet {
    pub r: Vec3,
    pub ru: Vec3,
    pub rv: Vec3,
    pub ruu: Vec3,
    pub ruv: Vec3,
    pub rvv: Vec3,
    /// r_uuu, r_uuv, r_uvv, r_vvv
    pub r3: [Vec3; 4],
    /// r_uuuu, r_uuuv, r_uuvv, r_uvvv, r_vvvv
    pub r4: [Vec3; 5],
    /// unit normal (r_u × r_v)/J
    pub n: Vec3,
    /// J = |r_u × r_v|
    pub jac: f64,
    pub first: QuadraticForm,
    /// (n·r_uu, n·r_uv, n·r_vv)
    pub second: DerivDirection,
}

impl SurfaceJet {
    /// Build a jet from `d(a, b)` = ∂_u^a ∂_v^b r, a + b ≤ 4.
    pub fn from_partials(d: impl Fn(usize, usize) -> Vec3) -> Result<Self> {
        let ru = d(1, 0);
        let rv = d(0, 1);
        let nn = cross(&ru, &rv);
        let jac = norm(&nn);
        if !(jac > 0.0) || !jac.is_finite() {
            return Err(Error::Geometry(format!("degenerate parameterization (J = {jac})")));
        }
        let n = [nn[0] / jac, nn[1] / jac, nn[2] / jac];
        let first = QuadraticForm::new(dot(&ru, &ru), dot(&ru, &rv), dot(&rv, &rv))?;
        let (ruu, ruv, rvv) = (d(2, 0), d(1, 1), d(0, 2));
        let second = DerivDirection::new(dot(&n, &ruu), dot(&n, &ruv), dot(&n, &rvv));
        Ok(SurfaceJet {
            r: d(0, 0),
            ru,
            rv,
            ruu,
            ruv,
            rvv,
            r3: [d(3, 0), d(2, 1), d(1, 2), d(0, 3)],
            r4: [d(4, 0), d(3, 1), d(2, 2), d(1, 3), d(0, 4)],
            n,
            jac,
            first,
            second,
        })
    }

    /// ∂_u^a ∂_v^b r for a + b ≤ 4.
    pub fn partial(&self, a: usize, b: usize) -> Vec3 {
        match (a, b) {
            (0, 0) => self.r,
            (1, 0) => self.ru,
            (0, 1) => self.rv,
            (2, 0) => self.ruu,
            (1, 1) => self.ruv,
            (0, 2) => self.rvv,
            (a, b) if a + b == 3 => self.r3[b],
            (a, b) if a + b == 4 => self.r4[b],
            _ => panic!("jet carries partials through order 4, asked for ({a}, {b})"),
        }
    }

    /// The same geometric point seen through the parameterization (u,v) → (v,u).
    pub fn swapped(&self) -> Result<SurfaceJet> {
        SurfaceJet::from_partials(|a, b| self.partial(b, a))
    }
}

/// Parameter rectangle and periodicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u: (f64, f64),
    pub v: (f64, f64),
    pub periodic_u: bool,
    pub periodic_v: bool,
}

impl Domain {
    pub fn period_u(&self) -> f64 {
        self.u.1 - self.u.0
    }

    pub fn period_v(&self) -> f64 {
        self.v.1 - self.v.0
    }
}

/// A smooth parameterized surface with analytic partial derivatives.
pub trait Surface: Send + Sync {
    /// ∂_u^a ∂_v^b r(u, v), a + b ≤ 4.
    fn partial(&self, u: f64, v: f64, a: usize, b: usize) -> Vec3;

    fn domain(&self) -> Domain;

    fn point(&self, u: f64, v: f64) -> Vec3 {
        self.partial(u, v, 0, 0)
    }

    fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        SurfaceJet::from_partials(|a, b| self.partial(u, v, a, b))
    }

    /// Whether r(u + t, v) is r(u, v) rotated by t about the z-axis.
    /// Grids on such surfaces have u-translation-invariant operators.
    fn rotational_in_u(&self) -> bool {
        false
    }
}

/// The torus r(u,v) = ((R + ρ cos v) cos u, (R + ρ cos v) sin u, ρ sin v).
/// Its normal r_u × r_v points away from the tube's core circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    pub major: f64,
    pub minor: f64,
}

pub fn torus_surface(major: f64, minor: f64) -> Result<Torus> {
    if !(major > minor && minor > 0.0) || !major.is_finite() {
        return Err(Error::Geometry(format!("torus needs R > ρ > 0, got R = {major}, ρ = {minor}")));
    }
    Ok(Torus { major, minor })
}

/// k-th derivative of cos at x and of sin at x.
#[inline]
fn dcos(x: f64, k: usize) -> f64 {
    (x + k as f64 * std::f64::consts::FRAC_PI_2).cos()
}

#[inline]
fn dsin(x: f64, k: usize) -> f64 {
    (x + k as f64 * std::f64::consts::FRAC_PI_2).sin()
}

impl Surface for Torus {
    fn partial(&self, u: f64, v: f64, a: usize, b: usize) -> Vec3 {
        let radial = if b == 0 { self.major + self.minor * v.cos() } else { self.minor * dcos(v, b) };
        let z = if a == 0 { self.minor * dsin(v, b) } else { 0.0 };
        [radial * dcos(u, a), radial * dsin(u, a), z]
    }

    fn domain(&self) -> Domain {
        let tau = 2.0 * std::f64::consts::PI;
        Domain { u: (0.0, tau), v: (0.0, tau), periodic_u: true, periodic_v: true }
    }

    fn rotational_in_u(&self) -> bool {
        true
    }
}

/// Exponent pairs (i, j) of the quartic patch coefficients, in storage order.
pub const QUARTIC_EXPONENTS: [(u32, u32); 12] =
    [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)];

/// Default coefficients (drawn once from a seeded uniform generator on [−0.6, 0.6]).
pub const QUARTIC_DEFAULT: [f64; 12] =
    [0.129, 0.325, -0.289, -0.42, 0.262, 0.438, -0.198, -0.322, 0.214, 0.482, -0.451, -0.54];

/// The graph r(u,v) = (u, v, Σ c_ij uⁱvʲ) over [−1, 1]².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPatch {
    pub coeffs: [f64; 12],
}

pub fn quartic_patch(coeffs: [f64; 12]) -> Result<QuarticPatch> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Geometry("non-finite patch coefficient".into()));
    }
    Ok(QuarticPatch { coeffs })
}

/// ∂^a x^i at x.
#[inline]
fn dpow(x: f64, i: u32, a: usize) -> f64 {
    let a = a as u32;
    if a > i {
        return 0.0;
    }
    let falling: f64 = (i - a + 1..=i).map(|k| k as f64).product();
    falling * x.powi((i - a) as i32)
}

impl Surface for QuarticPatch {
    fn partial(&self, u: f64, v: f64, a: usize, b: usize) -> Vec3 {
        let z: f64 =
            QUARTIC_EXPONENTS.iter().zip(&self.coeffs).map(|(&(i, j), c)| c * dpow(u, i, a) * dpow(v, j, b)).sum();
        match (a, b) {
            (0, 0) => [u, v, z],
            (1, 0) => [1.0, 0.0, z],
            (0, 1) => [0.0, 1.0, z],
            _ => [0.0, 0.0, z],
        }
    }

    fn domain(&self) -> Domain {
        Domain { u: (-1.0, 1.0), v: (-1.0, 1.0), periodic_u: false, periodic_v: false }
    }
}

/// The surface reparameterized by (u, v) → (v, u).
#[derive(Debug, Clone, Copy)]
pub struct Swapped<S>(pub S);

impl<S: Surface> Surface for Swapped<S> {
    fn partial(&self, u: f64, v: f64, a: usize, b: usize) -> Vec3 {
        self.0.partial(v, u, b, a)
    }

    fn domain(&self) -> Domain {
        let d = self.0.domain();
        Domain { u: d.v, v: d.u, periodic_u: d.periodic_v, periodic_v: d.periodic_u }
    }
}

/// The surface reparameterized by v → −v, which reverses the normal.
#[derive(Debug, Clone, Copy)]
pub struct FlippedV<S>(pub S);

impl<S: Surface> Surface for FlippedV<S> {
    fn partial(&self, u: f64, v: f64, a: usize, b: usize) -> Vec3 {
        let p = self.0.partial(u, -v, a, b);
        if b % 2 == 1 {
            [-p[0], -p[1], -p[2]]
        } else {
            p
        }
    }

    fn domain(&self) -> Domain {
        let d = self.0.domain();
        Domain { v: (-d.v.1, -d.v.0), ..d }
    }

    fn rotational_in_u(&self) -> bool {
        self.0.rotational_in_u()
    }
}
