//! Coefficients of the homogeneous polynomials in the kernel expansions.
//!
//! A sequence (c_0, …, c_d) stands for Σ_l c_l u^{d−l} v^l. With d^k the
//! order-k Taylor term of r(u) − r(0):
//!
//! * A family: 2d¹·d² (L3A) and 2d¹·d³ + d²·d² (L4A) from |r(u) − r(0)|².
//! * B family: twice, twice, and four times the degree-2, 3, 4 parts of
//!   −(r(u) − r(0))·(r_u × r_v)(u), the unnormalized double-layer numerator.
//! * C family: the same for (r(u) − r(0))·n(0), the target-normal numerator.

use super::{cross, dot, SurfaceJet, Vec3};

/// Sequence convolution, i.e. the coefficients of a polynomial product.
pub fn conv(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn arr<const N: usize>(v: Vec<f64>) -> [f64; N] {
    v.try_into().expect("convolution length")
}

#[derive(Debug, Clone, PartialEq)]
pub struct LCoeffs {
    pub l3a: [f64; 4],
    pub l4a: [f64; 5],
    pub l6a: [f64; 7],
    pub l2b: [f64; 3],
    pub l3b: [f64; 4],
    pub l4b: [f64; 5],
    pub l6b: [f64; 7],
    pub l2c: [f64; 3],
    pub l3c: [f64; 4],
    pub l4c: [f64; 5],
    pub l6c: [f64; 7],
}

#[inline]
fn triple(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    dot(&cross(a, b), c)
}

pub fn l_coeffs(j: &SurfaceJet) -> LCoeffs {
    let (ru, rv, ruu, ruv, rvv) = (&j.ru, &j.rv, &j.ruu, &j.ruv, &j.rvv);
    let [ruuu, ruuv, ruvv, rvvv] = &j.r3;
    let [ruuuu, ruuuv, ruuvv, ruvvv, rvvvv] = &j.r4;

    let l3a = [
        dot(ru, ruu),
        2.0 * dot(ru, ruv) + dot(rv, ruu),
        2.0 * dot(ruv, rv) + dot(ru, rvv),
        dot(rv, rvv),
    ];
    let l4a = [
        dot(ru, ruuu) / 3.0 + dot(ruu, ruu) / 4.0,
        dot(rv, ruuu) / 3.0 + dot(ru, ruuv) + dot(ruu, ruv),
        dot(rv, ruuv) + dot(ru, ruvv) + dot(ruu, rvv) / 2.0 + dot(ruv, ruv),
        dot(rv, ruvv) + dot(ru, rvvv) / 3.0 + dot(ruv, rvv),
        dot(rv, rvvv) / 3.0 + dot(rvv, rvv) / 4.0,
    ];
    let l6a = arr(conv(&l3a, &l3a));

    let n0 = cross(ru, rv);
    let l2b = [dot(&n0, ruu), 2.0 * dot(&n0, ruv), dot(&n0, rvv)];
    let l3b = [
        2.0 / 3.0 * dot(&n0, ruuu) - triple(ru, ruu, ruv),
        2.0 * dot(&n0, ruuv) - triple(ru, ruu, rvv) - triple(rv, ruu, ruv),
        2.0 * dot(&n0, ruvv) - triple(ru, ruv, rvv) - triple(rv, ruu, rvv),
        2.0 / 3.0 * dot(&n0, rvvv) - triple(rv, ruv, rvv),
    ];
    let l4b = [
        (-6.0 * triple(ru, ruu, ruuv) + 8.0 * triple(ru, ruv, ruuu) + 3.0 * dot(&n0, ruuuu)
            - 2.0 * triple(rv, ruu, ruuu))
            / 6.0,
        2.0 / 3.0
            * (-3.0 * triple(ru, ruu, ruvv) + 2.0 * triple(ru, rvv, ruuu) + 3.0 * dot(&n0, ruuuv)
                + 3.0 * triple(ru, ruv, ruuv)
                - 3.0 * triple(rv, ruu, ruuv)
                + triple(rv, ruv, ruuu)),
        -triple(ru, ruu, rvvv) + 3.0 * triple(ru, rvv, ruuv) + 3.0 * dot(&n0, ruuvv) - 3.0 * triple(rv, ruu, ruvv)
            + triple(rv, rvv, ruuu),
        2.0 / 3.0
            * (-triple(ru, ruv, rvvv) + 3.0 * triple(ru, rvv, ruvv) + 3.0 * dot(&n0, ruvvv)
                - 2.0 * triple(rv, ruu, rvvv)
                + 3.0 * triple(rv, rvv, ruuv)
                - 3.0 * triple(rv, ruv, ruvv)),
        (3.0 * dot(&n0, rvvvv) + 2.0 * triple(ru, rvv, rvvv) - 8.0 * triple(rv, ruv, rvvv)
            + 6.0 * triple(rv, rvv, ruvv))
            / 6.0,
    ];
    let l6b = add(&conv(&l4a, &l2b), &conv(&l3a, &l3b));

    let n = &j.n;
    let l2c = [dot(n, ruu), 2.0 * dot(n, ruv), dot(n, rvv)];
    let l3c = [dot(n, ruuu) / 3.0, dot(n, ruuv), dot(n, ruvv), dot(n, rvvv) / 3.0];
    let l4c = [
        dot(n, ruuuu) / 6.0,
        2.0 * dot(n, ruuuv) / 3.0,
        dot(n, ruuvv),
        2.0 * dot(n, ruvvv) / 3.0,
        dot(n, rvvvv) / 6.0,
    ];
    let l6c = add(&conv(&l4a, &l2c), &conv(&l3a, &l3c));

    LCoeffs { l3a, l4a, l6a, l2b, l3b, l4b, l6b: arr(l6b), l2c, l3c, l4c, l6c: arr(l6c) }
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
