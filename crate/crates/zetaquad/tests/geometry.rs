use std::f64::consts::PI;

use zetaquad::geometry::{
    conv, cross, dot, l_coeffs, quartic_patch, torus_surface, FlippedV, Surface, SurfaceJet, Swapped, Vec3,
    QUARTIC_DEFAULT,
};

/// Truncated bivariate polynomial, c[a][b] multiplies u^a v^b, total degree ≤ 4.
#[derive(Clone, Copy)]
struct Poly([[f64; 5]; 5]);

impl Poly {
    fn zero() -> Self {
        Poly([[0.0; 5]; 5])
    }
    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in 0..5 {
            for b in 0..5 - a {
                for c in 0..5 - a - b {
                    for d in 0..5 - a - b - c {
                        out.0[a + c][b + d] += self.0[a][b] * o.0[c][d];
                    }
                }
            }
        }
        out
    }
    fn add(&self, o: &Poly) -> Poly {
        let mut out = *self;
        for a in 0..5 {
            for b in 0..5 {
                out.0[a][b] += o.0[a][b];
            }
        }
        out
    }
    fn scale(&self, s: f64) -> Poly {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }
    fn du(&self) -> Poly {
        let mut out = Poly::zero();
        for a in 1..5 {
            for b in 0..5 - a {
                out.0[a - 1][b] = a as f64 * self.0[a][b];
            }
        }
        out
    }
    fn dv(&self) -> Poly {
        let mut out = Poly::zero();
        for a in 0..5 {
            for b in 1..5 - a {
                out.0[a][b - 1] = b as f64 * self.0[a][b];
            }
        }
        out
    }
    /// Degree-d coefficients ordered as u^{d−l} v^l.
    fn homogeneous(&self, d: usize) -> Vec<f64> {
        (0..=d).map(|l| self.0[d - l][l]).collect()
    }
}

type VPoly = [Poly; 3];

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Taylor polynomial of r(u) − r(0) from the jet.
fn taylor(j: &SurfaceJet) -> VPoly {
    let mut p = [Poly::zero(); 3];
    for a in 0..5 {
        for b in 0..5 - a {
            if a + b == 0 {
                continue;
            }
            let d = j.partial(a, b);
            for k in 0..3 {
                p[k].0[a][b] = d[k] / (fact(a) * fact(b));
            }
        }
    }
    p
}

fn vdot(a: &VPoly, b: &VPoly) -> Poly {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn vcross(a: &VPoly, b: &VPoly) -> VPoly {
    [
        a[1].mul(&b[2]).add(&a[2].mul(&b[1]).scale(-1.0)),
        a[2].mul(&b[0]).add(&a[0].mul(&b[2]).scale(-1.0)),
        a[0].mul(&b[1]).add(&a[1].mul(&b[0]).scale(-1.0)),
    ]
}

fn vconst(c: &Vec3) -> VPoly {
    let mut p = [Poly::zero(); 3];
    for k in 0..3 {
        p[k].0[0][0] = c[k];
    }
    p
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()))
}

fn check_against_polynomial_oracle(j: &SurfaceJet) {
    let l = l_coeffs(j);
    let dr = taylor(j);
    let d2 = vdot(&dr, &dr);
    assert!(close(&l.l3a, &d2.homogeneous(3), 1e-13));
    assert!(close(&l.l4a, &d2.homogeneous(4), 1e-13));

    let ru = [dr[0].du(), dr[1].du(), dr[2].du()];
    let rv = [dr[0].dv(), dr[1].dv(), dr[2].dv()];
    let b = vdot(&dr, &vcross(&ru, &rv)).scale(-1.0);
    let half = |v: Vec<f64>, s: f64| v.iter().map(|x| x * s).collect::<Vec<_>>();
    assert!(close(&l.l2b, &half(b.homogeneous(2), 2.0), 1e-13));
    assert!(close(&l.l3b, &half(b.homogeneous(3), 2.0), 1e-13));
    assert!(close(&l.l4b, &half(b.homogeneous(4), 4.0), 1e-12));

    let c = vdot(&dr, &vconst(&j.n));
    assert!(close(&l.l2c, &half(c.homogeneous(2), 2.0), 1e-13));
    assert!(close(&l.l3c, &half(c.homogeneous(3), 2.0), 1e-13));
    assert!(close(&l.l4c, &half(c.homogeneous(4), 4.0), 1e-13));

    assert_eq!(l.l6a.to_vec(), conv(&l.l3a, &l.l3a));
    let l6b: Vec<f64> = conv(&l.l4a, &l.l2b).iter().zip(conv(&l.l3a, &l.l3b)).map(|(a, b)| a + b).collect();
    assert!(close(&l.l6b, &l6b, 1e-15));
}

#[test]
fn l_coefficients_match_polynomial_expansion() {
    let t = torus_surface(1.0, 0.5).unwrap();
    for &(u, v) in &[(0.0, 0.0), (0.7, 1.9), (2.3, 4.4), (5.9, 3.1)] {
        check_against_polynomial_oracle(&t.jet(u, v).unwrap());
    }
    let p = quartic_patch(QUARTIC_DEFAULT).unwrap();
    for &(u, v) in &[(0.0, 0.0), (0.31, -0.42), (-0.8, 0.77)] {
        check_against_polynomial_oracle(&p.jet(u, v).unwrap());
    }
}

#[test]
fn torus_coefficients_match_symbolic_values() {
    // symbolic differentiation of the closed-form map at (u, v) = (0.7, 1.9)
    let l = l_coeffs(&torus_surface(1.0, 0.5).unwrap().jet(0.7, 1.9).unwrap());
    assert!(close(&l.l3a, &[0.0, -0.396_667_807_475_867_4, 0.0, 0.0], 1e-14));
    assert!(close(&l.l4a, &[-0.058_569_955_762_266_21, 0.0, 0.067_757_873_710_526_9, 0.0, -0.020_833_333_333_333_332], 1e-14));
    assert!(close(&l.l2b, &[0.113_610_333_777_585_59, 0.0, -0.209_588_804_142_062_07], 1e-14));
    assert!(close(&l.l3b, &[0.0, 0.268_429_243_808_298_63, 0.0, 0.118_287_510_960_926_81], 1e-14));
    assert!(close(&l.l4b, &[-0.018_935_055_629_597_6, 0.0, -0.467_071_701_131_305_14, 0.0, -0.005_479_728_500_927_582], 1e-14));
    assert!(close(&l.l3c, &[0.0, -0.152_964_472_735_679_76, 0.0, 0.0], 1e-14));
    assert!(close(&l.l4c, &[-0.045_171_915_807_017_93, 0.0, 0.052_258_072_021_395_825, 0.0, 0.083_333_333_333_333_33], 1e-14));
}

/// Central finite-difference jet of a surface, built from point evaluations.
fn fd_partial(s: &dyn Surface, u: f64, v: f64, a: usize, b: usize, h: f64) -> Vec3 {
    // 4th-order accurate first-derivative weights applied per direction
    fn weights(k: usize) -> Vec<(f64, f64)> {
        match k {
            0 => vec![(0.0, 1.0)],
            1 => vec![(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)],
            2 => vec![(-2.0, -1.0 / 12.0), (-1.0, 16.0 / 12.0), (0.0, -30.0 / 12.0), (1.0, 16.0 / 12.0), (2.0, -1.0 / 12.0)],
            3 => vec![(-3.0, 1.0 / 8.0), (-2.0, -1.0), (-1.0, 13.0 / 8.0), (1.0, -13.0 / 8.0), (2.0, 1.0), (3.0, -1.0 / 8.0)],
            4 => vec![(-3.0, -1.0 / 6.0), (-2.0, 2.0), (-1.0, -13.0 / 2.0), (0.0, 28.0 / 3.0), (1.0, -13.0 / 2.0), (2.0, 2.0), (3.0, -1.0 / 6.0)],
            _ => unreachable!(),
        }
    }
    let mut out = [0.0; 3];
    for (x, wx) in weights(a) {
        for (y, wy) in weights(b) {
            let p = s.point(u + x * h, v + y * h);
            for k in 0..3 {
                out[k] += wx * wy * p[k];
            }
        }
    }
    let scale = h.powi((a + b) as i32);
    out.map(|x| x / scale)
}

fn check_fd(s: &dyn Surface, u: f64, v: f64, tol: f64) {
    for a in 0..5 {
        for b in 0..5 - a {
            let exact = s.partial(u, v, a, b);
            let h = if a + b <= 2 { 1e-3 } else { 1e-2 };
            let fd = fd_partial(s, u, v, a, b, h);
            for k in 0..3 {
                assert!((exact[k] - fd[k]).abs() < tol * (1.0 + exact[k].abs()), "∂({a},{b}) comp {k}: {} vs {}", exact[k], fd[k]);
            }
        }
    }
}

#[test]
fn analytic_partials_match_finite_differences() {
    let t = torus_surface(1.0, 0.5).unwrap();
    check_fd(&t, 0.4, 2.2, 1e-6);
    check_fd(&t, 3.9, 5.6, 1e-6);
    let p = quartic_patch(QUARTIC_DEFAULT).unwrap();
    // polynomial surface: the stencils are exact up to rounding
    check_fd(&p, 0.2, -0.3, 1e-7);
}

fn jet_invariants(j: &SurfaceJet) {
    assert!((dot(&j.n, &j.n) - 1.0).abs() < 1e-14);
    assert!(dot(&j.n, &j.ru).abs() < 1e-12 && dot(&j.n, &j.rv).abs() < 1e-12);
    assert!(j.jac > 0.0);
    assert!((j.jac * j.jac - j.first.det()).abs() < 1e-12 * j.first.det());
    assert!((j.second.l - dot(&j.n, &j.ruu)).abs() < 1e-13);
    assert!((j.second.m - dot(&j.n, &j.ruv)).abs() < 1e-13);
    assert!((j.second.n - dot(&j.n, &j.rvv)).abs() < 1e-13);
}

#[test]
fn torus_grid_jets_are_valid_and_periodic() {
    let t = torus_surface(1.0, 0.5).unwrap();
    let h = 2.0 * PI / 32.0;
    for i in 0..32 {
        for k in 0..32 {
            let (u, v) = (i as f64 * h, k as f64 * h);
            let j = t.jet(u, v).unwrap();
            jet_invariants(&j);
            if i % 7 == 0 && k % 5 == 0 {
                let p = t.jet(u + 2.0 * PI, v - 2.0 * PI).unwrap();
                for (a, b) in [(0, 0), (1, 0), (2, 1), (0, 4)] {
                    let (x, y) = (j.partial(a, b), p.partial(a, b));
                    assert!((0..3).all(|c| (x[c] - y[c]).abs() < 1e-13));
                }
            }
            let out = cross(&j.ru, &j.rv);
            // outward: the normal points away from the core circle
            let core = [u.cos(), u.sin(), 0.0];
            let radial = [j.r[0] - core[0], j.r[1] - core[1], j.r[2]];
            assert!(dot(&out, &radial) > 0.0);
        }
    }
}

#[test]
fn flat_patch_has_no_curvature_terms() {
    let p = quartic_patch([0.0; 12]).unwrap();
    let j = p.jet(0.3, -0.2).unwrap();
    assert_eq!((j.first.e, j.first.f, j.first.g), (1.0, 0.0, 1.0));
    assert_eq!((j.second.l, j.second.m, j.second.n), (0.0, 0.0, 0.0));
    let l = l_coeffs(&j);
    for seq in [&l.l3a[..], &l.l4a, &l.l2b, &l.l3b, &l.l4b, &l.l6b, &l.l2c, &l.l3c, &l.l4c, &l.l6c] {
        assert!(seq.iter().all(|&x| x == 0.0));
    }
}

#[test]
fn reparameterization_symmetries() {
    let t = torus_surface(1.0, 0.5).unwrap();
    let (u, v) = (0.9, 2.7);
    let j = t.jet(u, v).unwrap();
    let l = l_coeffs(&j);

    // (u,v) → (v,u) swaps E and G, reverses every sequence, and (since the
    // orientation reverses) negates the normal-dependent ones
    let s = Swapped(t).jet(v, u).unwrap();
    assert!((s.first.e - j.first.g).abs() < 1e-15 && (s.first.g - j.first.e).abs() < 1e-15);
    assert!((s.second.l + j.second.n).abs() < 1e-14 && (s.second.n + j.second.l).abs() < 1e-14);
    let ls = l_coeffs(&s);
    let rev = |x: &[f64]| x.iter().rev().copied().collect::<Vec<_>>();
    let neg = |x: &[f64]| x.iter().map(|y| -y).collect::<Vec<_>>();
    assert!(close(&ls.l3a, &rev(&l.l3a), 1e-14));
    assert!(close(&ls.l6a, &rev(&l.l6a), 1e-14));
    assert!(close(&ls.l4b, &neg(&rev(&l.l4b)), 1e-13));

    // v → −v flips the normal and negates the second form and B/C families
    let f = FlippedV(t).jet(u, -v).unwrap();
    assert!((0..3).all(|k| (f.n[k] + j.n[k]).abs() < 1e-14));
    assert!((f.second.l + j.second.l).abs() < 1e-14 && (f.second.n + j.second.n).abs() < 1e-14);
    let lf = l_coeffs(&f);
    for (a, b) in [(&lf.l2b[..], &l.l2b[..]), (&lf.l2c, &l.l2c)] {
        // v → −v also flips the sign of odd powers of v
        let want: Vec<f64> = b.iter().enumerate().map(|(k, x)| if k % 2 == 1 { *x } else { -x }).collect();
        assert!(close(a, &want, 1e-14), "{a:?} vs {want:?}");
    }
}

#[test]
fn patch_jets_satisfy_invariants() {
    let p = quartic_patch(QUARTIC_DEFAULT).unwrap();
    for k in 0..25 {
        let (u, v) = (-0.9 + 0.075 * k as f64, 0.85 - 0.07 * k as f64);
        jet_invariants(&p.jet(u, v).unwrap());
    }
    assert!(quartic_patch([f64::NAN; 12]).is_err());
}
