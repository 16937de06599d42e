//! Parametric derivatives □ᵏZ(s), k ≤ 4, along directions □ = L∂_E + M∂_F + N∂_G,
//! and the vector operators □⁽ᵏ⁾ assembled from scalar derivatives.

use std::f64::consts::PI;

use super::{c_factor, checked_truncation, half_box, CurvatureScalars, DerivDirection, Ladder, QuadraticForm, ZetaOptions};
use crate::error::{Error, Result};

/// Per-direction constants: coefficients of π□ᵏQ̃_A = π(α_k Q̃_B + β_k Q̃_A).
#[derive(Clone, Copy)]
struct DirPlan {
    dir: DerivDirection,
    h: f64,
    dh: f64,
    d2h: f64,
    d3h: f64,
    alpha: [f64; 4],
    beta: [f64; 4],
}

impl DirPlan {
    fn new(q: &QuadraticForm, dir: DerivDirection) -> Self {
        let cs = CurvatureScalars::new(q, &dir);
        let h = cs.h;
        let (dh, d2h, d3h) = cs.derivatives();
        // □Q̃_B = −H Q̃_B, □²Q̃_B = (−□H + H²)Q̃_B, □³Q̃_B = (−□²H + 3H□H − H³)Q̃_B
        let c1 = -h;
        let c2 = -dh + h * h;
        let c3 = -d2h + 3.0 * h * dh - h * h * h;
        // □Q̃ = Q̃_B − HQ̃
        let (a1, b1) = (1.0, -h);
        // □²Q̃ = □Q̃_B − (□H Q̃ + H□Q̃)
        let (a2, b2) = (c1 - h * a1, -dh - h * b1);
        // □³Q̃ = □²Q̃_B − (□²H Q̃ + 2□H □Q̃ + H □²Q̃)
        let (a3, b3) = (c2 - 2.0 * dh * a1 - h * a2, -d2h - 2.0 * dh * b1 - h * b2);
        // □⁴Q̃ = □³Q̃_B − (□³H Q̃ + 3□²H □Q̃ + 3□H □²Q̃ + H □³Q̃)
        let a4 = c3 - 3.0 * d2h * a1 - 3.0 * dh * a2 - h * a3;
        let b4 = -d3h - 3.0 * d2h * b1 - 3.0 * dh * b2 - h * b3;
        DirPlan { dir, h, dh, d2h, d3h, alpha: [a1, a2, a3, a4], beta: [b1, b2, b3, b4] }
    }
}

/// Lattice sums for one direction; index layout follows the □ᵏZ formulas.
#[derive(Clone, Copy, Default)]
struct DirSums {
    t: [f64; 10],
    companion: f64,
}

/// Values and derivatives of Z at s and at s+2 along a set of directions.
struct Evaluation {
    s1: f64,
    c: f64,
    cc: f64,
    z: f64,
    zc: f64,
    plans: Vec<DirPlan>,
    sums: Vec<DirSums>,
}

fn evaluate(q: &QuadraticForm, s: f64, dirs: &[DerivDirection], opts: &ZetaOptions) -> Result<Evaluation> {
    let q = QuadraticForm::new(q.e, q.f, q.g)?;
    if s == 2.0 {
        return Err(Error::Pole(s));
    }
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Domain(format!("derivative evaluation at s = {s}")));
    }
    let d = q.det();
    let rd = d.sqrt();
    let qt = q.scaled();
    let s1 = s / 2.0;
    let s2 = 1.0 - s1;
    let plans: Vec<DirPlan> = dirs.iter().map(|&dir| DirPlan::new(&q, dir)).collect();
    let mut sums = vec![DirSums::default(); dirs.len()];
    let (mut s0, mut sc0) = (0.0, 0.0);
    let mut err = None;
    half_box(checked_truncation(&q, opts)?, |i, j| {
        if err.is_some() {
            return;
        }
        let x = qt.eval(i, j);
        let lad = match Ladder::general(s1, x) {
            Ok(l) => l,
            Err(e) => {
                err = Some(e);
                return;
            }
        };
        let g = [lad.pair(0), lad.pair(1), lad.pair(2), lad.pair(3), lad.pair(4)];
        s0 += g[0];
        sc0 += lad.a[1] + lad.neg;
        let gc = lad.a[2] + lad.b[0];
        for (p, acc) in plans.iter().zip(sums.iter_mut()) {
            let xb = p.dir.eval(i, j) / rd;
            let p1 = PI * (p.alpha[0] * xb + p.beta[0] * x);
            let p2 = PI * (p.alpha[1] * xb + p.beta[1] * x);
            let p3 = PI * (p.alpha[2] * xb + p.beta[2] * x);
            let p4 = PI * (p.alpha[3] * xb + p.beta[3] * x);
            let t = &mut acc.t;
            t[0] += g[1] * p1;
            t[1] += g[2] * p1 * p1;
            t[2] += g[1] * p2;
            t[3] += g[3] * p1 * p1 * p1;
            t[4] += g[2] * p1 * p2;
            t[5] += g[1] * p3;
            t[6] += g[4] * p1 * p1 * p1 * p1;
            t[7] += g[3] * p1 * p1 * p2;
            t[8] += g[2] * (4.0 * p1 * p3 + 3.0 * p2 * p2);
            t[9] += g[1] * p4;
            acc.companion += gc * p1;
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    for acc in sums.iter_mut() {
        acc.t.iter_mut().for_each(|v| *v *= 2.0);
        acc.companion *= 2.0;
    }
    let c = c_factor(s1, d);
    let cc = c_factor(s1 + 1.0, d);
    let z = c * (-1.0 / s2 - 1.0 / s1 + 2.0 * s0);
    let zc = if s == -2.0 { -1.0 } else { cc * (1.0 / s1 - 1.0 / (s1 + 1.0) + 2.0 * sc0) };
    Ok(Evaluation { s1, c, cc, z, zc, plans, sums })
}

impl Evaluation {
    /// [Z, □Z, □²Z, □³Z, □⁴Z] at s for direction `k`.
    fn scalar(&self, k: usize) -> [f64; 5] {
        let p = &self.plans[k];
        let t = &self.sums[k].t;
        let (s1, c, z) = (self.s1, self.c, self.z);
        let (h, dh, d2h, d3h) = (p.h, p.dh, p.d2h, p.d3h);
        let sh = s1 * h;
        let dz1 = -sh * z - c * t[0];
        let dz2 = -(s1 * dh + sh * sh) * z - 2.0 * sh * dz1 + c * t[1] - c * t[2];
        let dz3 = -(s1 * d2h + 3.0 * s1 * s1 * h * dh + sh.powi(3)) * z
            - (3.0 * s1 * dh + 3.0 * sh * sh) * dz1
            - 3.0 * sh * dz2
            - c * t[3]
            + 3.0 * c * t[4]
            - c * t[5];
        let dz4 = -(s1 * d3h
            + 3.0 * s1 * s1 * dh * dh
            + 4.0 * s1 * s1 * h * d2h
            + 6.0 * s1.powi(3) * h * h * dh
            + sh.powi(4))
            * z
            - (4.0 * s1 * d2h + 12.0 * s1 * s1 * h * dh + 4.0 * sh.powi(3)) * dz1
            - (6.0 * s1 * dh + 6.0 * sh * sh) * dz2
            - 4.0 * sh * dz3
            + c * t[6]
            - 6.0 * c * t[7]
            + c * t[8]
            - c * t[9];
        [z, dz1, dz2, dz3, dz4]
    }

    /// [Z(s+2), □Z(s+2)] for direction `k`.
    fn companion(&self, k: usize) -> [f64; 2] {
        let p = &self.plans[k];
        let dzc = if self.zc == -1.0 && self.s1 == -1.0 {
            0.0
        } else {
            -(self.s1 + 1.0) * p.h * self.zc - self.cc * self.sums[k].companion
        };
        [self.zc, dzc]
    }
}

fn check_order(k: usize) -> Result<()> {
    if (1..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("derivative order {k}; expected 1..=4")))
    }
}

/// □ᵏZ(s) along `dir`.
pub fn deriv_scalar(q: &QuadraticForm, dir: &DerivDirection, k: usize, s: f64) -> Result<f64> {
    check_order(k)?;
    if s == 0.0 {
        QuadraticForm::new(q.e, q.f, q.g)?;
        return Ok(0.0);
    }
    Ok(evaluate(q, s, &[*dir], &ZetaOptions::default())?.scalar(0)[k])
}

/// (□ᵏZ(s), □Z(s+2)): the companion first derivative at s+2 comes from
/// the same lattice pass.
pub fn deriv_scalar_pair(q: &QuadraticForm, dir: &DerivDirection, k: usize, s: f64) -> Result<(f64, f64)> {
    check_order(k)?;
    let ev = evaluate(q, s, &[*dir], &ZetaOptions::default())?;
    Ok((ev.scalar(0)[k], ev.companion(0)[1]))
}

/// Components of □⁽ᵏ⁾Z, ordered as the monomials u^{2k−l} v^l, l = 0..=2k.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaDerivVector {
    pub order: usize,
    pub entries: Vec<f64>,
}

impl ZetaDerivVector {
    /// Dot product with a same-length coefficient sequence.
    pub fn dot(&self, coeffs: &[f64]) -> f64 {
        assert_eq!(coeffs.len(), self.entries.len(), "coefficient length must be 2k+1");
        self.entries.iter().zip(coeffs).map(|(a, b)| a * b).sum()
    }
}

/// The nine directions from which □⁽¹⁾..□⁽⁴⁾ are assembled.
const DIRS: [DerivDirection; 9] = [
    DerivDirection::new(1.0, 0.0, 0.0),
    DerivDirection::new(0.0, 0.5, 0.0),
    DerivDirection::new(0.0, 0.0, 1.0),
    DerivDirection::new(1.0, 0.5, 0.0),
    DerivDirection::new(0.0, 0.5, 1.0),
    DerivDirection::new(1.0, -0.5, 0.0),
    DerivDirection::new(0.0, -0.5, 1.0),
    DerivDirection::new(1.0, 1.0, 0.0),
    DerivDirection::new(0.0, 1.0, 1.0),
];

const M_INV: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [-1.0 / 8.0, 1.0 / 4.0, -1.0 / 24.0, -1.0 / 12.0, 1.0 / 2.0],
    [-1.0 / 6.0, 1.0 / 12.0, 0.0, 1.0 / 12.0, -1.0 / 6.0],
    [1.0 / 8.0, -1.0 / 8.0, 1.0 / 24.0, -1.0 / 24.0, -1.0 / 2.0],
    [0.0, 0.0, 0.0, 0.0, 1.0],
];

fn mat5(a: &[f64; 5]) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (o, row) in out.iter_mut().zip(M_INV.iter()) {
        *o = row.iter().zip(a).map(|(m, x)| m * x).sum();
    }
    out
}

/// Z(s), Z(s+2) and all vector derivatives at s, plus □⁽¹⁾Z(s+2), from a
/// single lattice pass (one gamma ladder per lattice point).
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaBundle {
    pub s: f64,
    pub z: f64,
    pub z_next: f64,
    pub v1: [f64; 3],
    pub v2: [f64; 5],
    pub v3: [f64; 7],
    pub v4: [f64; 9],
    /// □⁽¹⁾Z(s+2)
    pub v1_next: [f64; 3],
}

impl ZetaBundle {
    pub fn new(q: &QuadraticForm, s: f64) -> Result<Self> {
        Self::with_options(q, s, &ZetaOptions::default())
    }

    pub fn with_options(q: &QuadraticForm, s: f64, opts: &ZetaOptions) -> Result<Self> {
        let ev = evaluate(q, s, &DIRS, opts)?;
        let d: Vec<[f64; 5]> = (0..DIRS.len()).map(|k| ev.scalar(k)).collect();
        let c: Vec<[f64; 2]> = (0..3).map(|k| ev.companion(k)).collect();
        let v1 = [d[0][1], d[1][1], d[2][1]];
        let (a, b, cc, dd, e) = (d[0][2], d[1][2], d[2][2], d[3][2], d[4][2]);
        let v2 = [a, (dd - a - b) / 2.0, b, (e - b - cc) / 2.0, cc];
        let (a, b, cc) = (d[0][3], d[1][3], d[2][3]);
        let (dd, e, f, g) = (d[3][3], d[5][3], d[4][3], d[6][3]);
        let v3 = [
            a,
            (dd - e - 2.0 * b) / 6.0,
            (dd + e - 2.0 * a) / 6.0,
            b,
            (f + g - 2.0 * cc) / 6.0,
            (f - g - 2.0 * b) / 6.0,
            cc,
        ];
        // a_{p,q,r} = □⁴ along (p, q/2, r)
        let ef = mat5(&[d[0][4], d[3][4], d[7][4], d[5][4], d[1][4]]);
        let gf = mat5(&[d[2][4], d[4][4], d[8][4], d[6][4], d[1][4]]);
        let v4 = [ef[0], ef[1], ef[2], ef[3], ef[4], gf[3], gf[2], gf[1], gf[0]];
        Ok(ZetaBundle {
            s,
            z: ev.z,
            z_next: ev.zc,
            v1,
            v2,
            v3,
            v4,
            v1_next: [c[0][1], c[1][1], c[2][1]],
        })
    }

    pub fn vector(&self, k: usize) -> ZetaDerivVector {
        let entries = match k {
            1 => self.v1.to_vec(),
            2 => self.v2.to_vec(),
            3 => self.v3.to_vec(),
            4 => self.v4.to_vec(),
            _ => panic!("vector derivative order {k}"),
        };
        ZetaDerivVector { order: k, entries }
    }
}

/// □⁽ᵏ⁾Z(s) via the scalar-derivative combinations.
pub fn deriv_vector(q: &QuadraticForm, k: usize, s: f64) -> Result<ZetaDerivVector> {
    check_order(k)?;
    Ok(ZetaBundle::new(q, s)?.vector(k))
}
