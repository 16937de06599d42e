use num_complex::Complex64;

use crate::error::Result;

#[derive(Debug, Clone)]
pub struct GmresResult {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    /// Relative residual estimate after each iteration (entry 0 is 1).
    pub residuals: Vec<f64>,
    pub converged: bool,
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Unrestarted GMRES from a zero initial guess with modified Gram–Schmidt
/// and Givens rotations. Stops once the relative residual is ≤ `tol` or
/// after `maxit` iterations.
pub fn gmres(
    apply: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
    rhs: &[Complex64],
    tol: f64,
    maxit: usize,
) -> Result<GmresResult> {
    let n = rhs.len();
    let beta = norm2(rhs);
    if beta == 0.0 {
        return Ok(GmresResult { x: vec![Complex64::default(); n], iterations: 0, residuals: vec![0.0], converged: true });
    }
    let mut basis: Vec<Vec<Complex64>> = vec![rhs.iter().map(|z| z / beta).collect()];
    // Hessenberg columns after rotation (upper triangular R)
    let mut r: Vec<Vec<Complex64>> = Vec::new();
    let mut cs: Vec<(f64, Complex64)> = Vec::new();
    let mut g = vec![Complex64::from(beta)];
    let mut residuals = vec![1.0];
    let mut converged = false;
    for k in 0..maxit.min(n) {
        let mut w = apply(&basis[k])?;
        let mut h = Vec::with_capacity(k + 2);
        for q in &basis {
            let c = dotc(q, &w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
            h.push(c);
        }
        let hn = norm2(&w);
        h.push(Complex64::from(hn));
        for (j, &(c, s)) in cs.iter().enumerate() {
            let (a, b) = (h[j], h[j + 1]);
            h[j] = c * a + s * b;
            h[j + 1] = -s.conj() * a + c * b;
        }
        // new rotation zeroing h[k+1]
        let (a, b) = (h[k], h[k + 1]);
        let den = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if den == 0.0 {
            (1.0, Complex64::default())
        } else if a.norm() == 0.0 {
            (0.0, b.conj() / b.norm())
        } else {
            let c = a.norm() / den;
            (c, a / a.norm() * b.conj() / den)
        };
        h[k] = c * a + s * b;
        h[k + 1] = Complex64::default();
        cs.push((c, s));
        let gk = g[k];
        g[k] = c * gk;
        g.push(-s.conj() * gk);
        h.truncate(k + 1);
        r.push(h);
        let res = g[k + 1].norm() / beta;
        residuals.push(res);
        if res <= tol || hn == 0.0 {
            converged = res <= tol || hn == 0.0;
            break;
        }
        basis.push(w.iter().map(|z| z / hn).collect());
    }
    let m = r.len();
    // back substitution R y = g
    let mut y = vec![Complex64::default(); m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for j in i + 1..m {
            acc -= r[j][i] * y[j];
        }
        y[i] = acc / r[i][i];
    }
    let mut x = vec![Complex64::default(); n];
    for (yj, q) in y.iter().zip(&basis) {
        for (xi, qi) in x.iter_mut().zip(q) {
            *xi += yj * qi;
        }
    }
    Ok(GmresResult { x, iterations: m, residuals, converged })
}
