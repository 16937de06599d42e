//! The two-dimensional Epstein zeta function Z_A(s) = Σ' Q_A(i,j)^{-s/2},
//! its analytic continuation, parametric derivatives, and lattice-sum oracles.
//!
//! Every evaluation rescales the form to unit determinant, sums incomplete
//! gamma values over a truncated box of lattice points, and scales back.

mod deriv;
mod gamma;
mod wigner;

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use deriv::{deriv_scalar, deriv_scalar_pair, deriv_vector, ZetaBundle, ZetaDerivVector};
pub use gamma::{erfc, g_scaled, gamma, gamma_chain, rgamma};
pub(crate) use gamma::Ladder;
pub use wigner::{richardson, wigner_oracle, wigner_oracle_em, WignerTerm};

/// Default truncation threshold: terms with πQ̃ ≥ 33 are below machine epsilon.
pub const X_CUT: f64 = 33.0;

/// First fundamental form Q(u,v) = E u² + 2F uv + G v².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl QuadraticForm {
    /// Validating constructor: requires E > 0, G > 0, EG − F² > 0.
    pub fn new(e: f64, f: f64, g: f64) -> Result<Self> {
        let ok = e.is_finite() && f.is_finite() && g.is_finite() && e > 0.0 && g > 0.0 && e * g - f * f > 0.0;
        if ok {
            Ok(Self { e, f, g })
        } else {
            Err(Error::NotPositiveDefinite { e, f, g })
        }
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    /// Smaller eigenvalue of the unit-determinant form Q/√D.
    pub fn lambda_min(&self) -> f64 {
        let (e, f, g) = (self.e, self.f, self.g);
        ((e + g) / 2.0 - ((e - g).powi(2) + 4.0 * f * f).sqrt() / 2.0) / self.det().sqrt()
    }

    /// The form divided by √D.
    pub fn scaled(&self) -> QuadraticForm {
        let r = self.det().sqrt();
        QuadraticForm { e: self.e / r, f: self.f / r, g: self.g / r }
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.e * u * u + 2.0 * self.f * u * v + self.g * v * v
    }

    /// Multiply every coefficient by c > 0.
    pub fn scale(&self, c: f64) -> QuadraticForm {
        QuadraticForm { e: c * self.e, f: c * self.f, g: c * self.g }
    }

    /// Exchange the roles of u and v.
    pub fn swapped(&self) -> QuadraticForm {
        QuadraticForm { e: self.g, f: self.f, g: self.e }
    }
}

/// Direction (L, M, N) of the derivative □ = L∂_E + M∂_F + N∂_G; equally the
/// coefficients of Q_B = L u² + 2M uv + N v².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DerivDirection {
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl DerivDirection {
    pub const fn new(l: f64, m: f64, n: f64) -> Self {
        Self { l, m, n }
    }

    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        self.l * u * u + 2.0 * self.m * u * v + self.n * v * v
    }
}

/// H_D = (GL + EN − 2FM)/(2D) and K_D = (LN − M²)/D for a form and a direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureScalars {
    pub h: f64,
    pub k: f64,
}

impl CurvatureScalars {
    pub fn new(q: &QuadraticForm, b: &DerivDirection) -> Self {
        let d = q.det();
        CurvatureScalars {
            h: (q.g * b.l + q.e * b.n - 2.0 * q.f * b.m) / (2.0 * d),
            k: (b.l * b.n - b.m * b.m) / d,
        }
    }

    /// (□H, □²H, □³H) along the same direction.
    pub fn derivatives(&self) -> (f64, f64, f64) {
        let (h, k) = (self.h, self.k);
        let dh = k - 2.0 * h * h;
        let d2h = -2.0 * h * k - 4.0 * h * dh;
        let d3h = (4.0 * h * h - 2.0 * dh) * k - 4.0 * dh * dh - 4.0 * h * d2h;
        (dh, d2h, d3h)
    }
}

/// Evaluation options shared by the zeta routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaOptions {
    pub x_cut: f64,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        Self { x_cut: X_CUT }
    }
}

/// Box half-width N = ⌊√(x_cut/(πλ))⌋.
pub fn truncation(q: &QuadraticForm, opts: &ZetaOptions) -> i64 {
    (opts.x_cut / (PI * q.lambda_min())).sqrt().floor() as i64
}

/// Largest box half-width accepted; beyond it the form is numerically degenerate.
pub const MAX_BOX: i64 = 2000;

pub(crate) fn checked_truncation(q: &QuadraticForm, opts: &ZetaOptions) -> Result<i64> {
    let n = (opts.x_cut / (PI * q.lambda_min())).sqrt();
    if n.is_finite() && n <= MAX_BOX as f64 {
        Ok(n.floor() as i64)
    } else {
        Err(Error::Domain(format!("form too close to degenerate (λ_min = {:e})", q.lambda_min())))
    }
}

/// Visit one representative of each ±(i,j) pair of the punctured box
/// |i|,|j| ≤ n. Summands are even, so full sums are twice the visited sums.
#[inline]
pub(crate) fn half_box(n: i64, mut f: impl FnMut(f64, f64)) {
    for j in 1..=n {
        f(0.0, j as f64);
    }
    for i in 1..=n {
        for j in -n..=n {
            f(i as f64, j as f64);
        }
    }
}

/// Z_A(1) with the default truncation.
pub fn zeta_s1(q: &QuadraticForm) -> Result<f64> {
    zeta_s1_with(q, &ZetaOptions::default())
}

/// Z_A(1) = D^{-1/4} (−4 + 2 Σ' g(1/2, Q̃)).
pub fn zeta_s1_with(q: &QuadraticForm, opts: &ZetaOptions) -> Result<f64> {
    let q = QuadraticForm::new(q.e, q.f, q.g)?;
    let qt = q.scaled();
    let n = checked_truncation(&q, opts)?;
    let mut sum = 0.0;
    half_box(n, |i, j| {
        sum += gamma::g_half(PI * qt.eval(i, j));
    });
    Ok(q.det().powf(-0.25) * (-4.0 + 4.0 * sum))
}

/// Z_{A,B}(1) = −(L∂_E + M∂_F + N∂_G) Z_A(1).
pub fn zeta_dlp(q: &QuadraticForm, b: &DerivDirection) -> Result<f64> {
    Ok(zeta_s1_and_dlp(q, b, &ZetaOptions::default())?.1)
}

/// (Z_A(1), Z_{A,B}(1)) from one pass over the lattice, sharing the gamma
/// values between the two sums:
/// Z_{A,B}(1) = D^{-1/4}(−2H + Σ' {(Q̃_B/Q̃_A) g(1/2,Q̃_A) + 2(Q̃_B/Q̃_A − H) e^{−πQ̃_A}}).
pub fn zeta_s1_and_dlp(q: &QuadraticForm, b: &DerivDirection, opts: &ZetaOptions) -> Result<(f64, f64)> {
    let q = QuadraticForm::new(q.e, q.f, q.g)?;
    let rd = q.det().sqrt();
    let qt = q.scaled();
    let h = CurvatureScalars::new(&q, b).h;
    let n = checked_truncation(&q, opts)?;
    let (mut s0, mut s1) = (0.0, 0.0);
    half_box(n, |i, j| {
        let x = qt.eval(i, j);
        let ratio = b.eval(i, j) / rd / x;
        let y = PI * x;
        let g = gamma::g_half(y);
        s0 += g;
        s1 += ratio * g + 2.0 * (ratio - h) * (-y).exp();
    });
    let scale = q.det().powf(-0.25);
    Ok((scale * (-4.0 + 4.0 * s0), scale * (-2.0 * h + 2.0 * s1)))
}

/// C_s(D) = π^s / (Γ(s) √D^s).
#[inline]
pub(crate) fn c_factor(s: f64, d: f64) -> f64 {
    PI.powf(s) * rgamma(s) * d.powf(-s / 2.0)
}

/// (Z(s), Z(s+2)) for real s ≠ 2, by the incomplete-gamma representation.
/// Z(0) = −1 is returned as the limit value (its companion Z(2) as NaN).
pub fn zeta_general(q: &QuadraticForm, s: f64) -> Result<(f64, f64)> {
    zeta_general_with(q, s, &ZetaOptions::default())
}

pub fn zeta_general_with(q: &QuadraticForm, s: f64, opts: &ZetaOptions) -> Result<(f64, f64)> {
    let q = QuadraticForm::new(q.e, q.f, q.g)?;
    if s == 2.0 {
        return Err(Error::Pole(s));
    }
    if !s.is_finite() {
        return Err(Error::Domain(format!("s = {s}")));
    }
    if s == 0.0 {
        // the companion Z(2) sits on the pole
        return Ok((-1.0, f64::NAN));
    }
    let d = q.det();
    let qt = q.scaled();
    let n = checked_truncation(&q, opts)?;
    let s1 = s / 2.0;
    let s2 = 1.0 - s1;
    let (mut sum, mut sumc) = (0.0, 0.0);
    let mut err = None;
    half_box(n, |i, j| {
        if err.is_some() {
            return;
        }
        match Ladder::general(s1, qt.eval(i, j)) {
            Ok(l) => {
                sum += l.pair(0);
                sumc += l.a[1] + l.neg;
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    // the dedicated s = 1 sum carries less roundoff
    let z = if s == 1.0 { zeta_s1_with(&q, opts)? } else { c_factor(s1, d) * (-1.0 / s2 - 1.0 / s1 + 2.0 * sum) };
    let zc = if s == -2.0 { -1.0 } else { c_factor(s1 + 1.0, d) * (1.0 / s1 - 1.0 / (s1 + 1.0) + 2.0 * sumc) };
    Ok((z, zc))
}
