//! Brute-force lattice-sum-minus-integral oracles.
//!
//! For a homogeneous integrand f = u^α v^β Q^{-m-1/2} of degree
//! p = α+β−2m−1 the truncated difference
//!
//!   W(N) = Σ'_{|i|,|j|≤N} f(i,j) − ∫_{[−M,M]²} f,   M = N + 1/2,
//!
//! converges (for p < 0) or can be made to converge after subtracting its
//! leading Euler–Maclaurin boundary term (p ≥ 0) to the Wigner-type limit.
//! The integral is reduced by homogeneity to edge integrals:
//! ∫_{[−M,M]²} f = M^{p+2}/(p+2) ∮_{∂[−1,1]²} f (x·n) ds.

use nalgebra::{DMatrix, DVector};

use super::QuadraticForm;
use crate::error::{Error, Result};

/// f(u,v) = u^α v^β Q(u,v)^{−m−1/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WignerTerm {
    pub alpha: u32,
    pub beta: u32,
    pub m: i32,
}

impl WignerTerm {
    pub fn new(alpha: u32, beta: u32, m: i32) -> Self {
        Self { alpha, beta, m }
    }

    /// Homogeneity degree p.
    pub fn degree(&self) -> i32 {
        self.alpha as i32 + self.beta as i32 - 2 * self.m - 1
    }

    fn mu(&self) -> f64 {
        -(self.m as f64) - 0.5
    }

    #[inline]
    fn eval(&self, q: &QuadraticForm, u: f64, v: f64) -> f64 {
        u.powi(self.alpha as i32) * v.powi(self.beta as i32) * q.eval(u, v).powf(self.mu())
    }

    fn du(&self, q: &QuadraticForm, u: f64, v: f64) -> f64 {
        let qq = q.eval(u, v);
        let mu = self.mu();
        let (a, b) = (self.alpha as i32, self.beta as i32);
        let mut out = mu * u.powi(a) * v.powi(b) * qq.powf(mu - 1.0) * 2.0 * (q.e * u + q.f * v);
        if a > 0 {
            out += a as f64 * u.powi(a - 1) * v.powi(b) * qq.powf(mu);
        }
        out
    }

    fn dv(&self, q: &QuadraticForm, u: f64, v: f64) -> f64 {
        let qq = q.eval(u, v);
        let mu = self.mu();
        let (a, b) = (self.alpha as i32, self.beta as i32);
        let mut out = mu * u.powi(a) * v.powi(b) * qq.powf(mu - 1.0) * 2.0 * (q.f * u + q.g * v);
        if b > 0 {
            out += b as f64 * u.powi(a) * v.powi(b - 1) * qq.powf(mu);
        }
        out
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite Gauss–Legendre (order 16) over [−1, 1].
fn edge_integral(f: impl Fn(f64) -> f64) -> f64 {
    const PANELS: usize = 8;
    let (x, w) = gauss_legendre(16);
    let mut sum = 0.0;
    for p in 0..PANELS {
        let a = -1.0 + 2.0 * p as f64 / PANELS as f64;
        let half = 1.0 / PANELS as f64;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * half * f(a + half * (xi + 1.0));
        }
    }
    sum
}

/// Neumaier-compensated accumulator.
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

fn parity(t: &WignerTerm) -> f64 {
    if (t.alpha + t.beta) % 2 == 0 {
        2.0
    } else {
        0.0
    }
}

/// The raw sharp-box difference W(N).
pub fn wigner_oracle(q: &QuadraticForm, monomial: (u32, u32), m: i32, n: usize) -> Result<f64> {
    let q = QuadraticForm::new(q.e, q.f, q.g)?;
    let t = WignerTerm::new(monomial.0, monomial.1, m);
    let p = t.degree();
    if p + 2 <= 0 {
        return Err(Error::Divergent(p));
    }
    if n == 0 || n > 4096 {
        return Err(Error::Unsupported(format!("oracle box size {n}")));
    }
    // f(−i,−j) = (−1)^{α+β} f(i,j): sum one of each pair
    let mut acc = Compensated::default();
    let ni = n as i64;
    for j in 1..=ni {
        acc.add(t.eval(&q, 0.0, j as f64));
    }
    for i in 1..=ni {
        for j in -ni..=ni {
            acc.add(t.eval(&q, i as f64, j as f64));
        }
    }
    let sum = parity(&t) * acc.value();
    let m_half = n as f64 + 0.5;
    let unit = parity(&t) / (p + 2) as f64
        * (edge_integral(|s| t.eval(&q, 1.0, s)) + edge_integral(|s| t.eval(&q, s, 1.0)));
    Ok(sum - m_half.powi(p + 2) * unit)
}

/// W(N) minus its leading Euler–Maclaurin boundary term,
/// −(1/24)∮ ∂_n f ds = −(1/12) M^p (∫∂_u f(1,t)dt + ∫∂_v f(t,1)dt) for even f.
/// The remainder decays like M^{p−2}, which makes the limit observable for
/// integrands of nonnegative degree whose raw box difference grows.
pub fn wigner_oracle_em(q: &QuadraticForm, monomial: (u32, u32), m: i32, n: usize) -> Result<f64> {
    let raw = wigner_oracle(q, monomial, m, n)?;
    let q = QuadraticForm::new(q.e, q.f, q.g)?;
    let t = WignerTerm::new(monomial.0, monomial.1, m);
    let em = parity(&t) / 2.0 * (-1.0 / 12.0)
        * (edge_integral(|s| t.du(&q, 1.0, s)) + edge_integral(|s| t.dv(&q, s, 1.0)));
    Ok(raw - em * (n as f64 + 0.5).powi(t.degree()))
}

/// Fit W(x_k) = L + Σ_j c_j x_k^{e_j} in the least-squares sense and return L.
pub fn richardson(xs: &[f64], values: &[f64], exponents: &[f64]) -> f64 {
    assert_eq!(xs.len(), values.len());
    assert!(xs.len() > exponents.len(), "need more samples than error terms");
    let rows = xs.len();
    let cols = exponents.len() + 1;
    let a = DMatrix::from_fn(rows, cols, |r, c| if c == 0 { 1.0 } else { xs[r].powf(exponents[c - 1]) });
    let b = DVector::from_column_slice(values);
    let sol = a.svd(true, true).solve(&b, 1e-300).expect("least-squares solve");
    sol[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_box_integral() {
        // ∫_{[-1,1]²} (u²+v²)^{-1/2} = 8 asinh(1)
        let q = QuadraticForm::new(1.0, 0.0, 1.0).unwrap();
        let t = WignerTerm::new(0, 0, 0);
        let unit = 2.0 * (edge_integral(|s| t.eval(&q, 1.0, s)) + edge_integral(|s| t.eval(&q, s, 1.0)));
        assert!((unit - 8.0 * 1f64.asinh()).abs() < 1e-14);
    }
}
