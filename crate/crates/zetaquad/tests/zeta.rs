use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zetaquad::zeta::{
    deriv_scalar, deriv_scalar_pair, deriv_vector, g_scaled, gamma_chain, richardson, wigner_oracle, wigner_oracle_em,
    zeta_dlp, zeta_general, zeta_general_with, zeta_s1, zeta_s1_with, DerivDirection, QuadraticForm, ZetaBundle,
    ZetaOptions,
};

const SQUARE_Z1: f64 = -3.900_264_920_001_956;
const HEX_Z1: f64 = -4.213_422_636_136_907;
// 4ζ(2)G and 4ζ(3/2)β(3/2), 30-digit references
const SQUARE_Z4: f64 = 6.026_812_039_691_940;
const SQUARE_Z3: f64 = 9.033_621_683_100_950;

fn form(e: f64, f: f64, g: f64) -> QuadraticForm {
    QuadraticForm::new(e, f, g).unwrap()
}

fn random_form(rng: &mut ChaCha8Rng, lam_min: f64) -> QuadraticForm {
    loop {
        let e = rng.random_range(0.3..3.0);
        let g = rng.random_range(0.3..3.0);
        let f = rng.random_range(-1.0..1.0) * (e * g as f64).sqrt();
        if let Ok(q) = QuadraticForm::new(e, f, g) {
            if q.lambda_min() >= lam_min {
                return q;
            }
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn z(e: f64, f: f64, g: f64, s: f64) -> f64 {
    zeta_general(&form(e, f, g), s).unwrap().0
}

#[test]
fn special_values_and_homogeneity() {
    assert!((zeta_s1(&form(1.0, 0.0, 1.0)).unwrap() - SQUARE_Z1).abs() < 1e-13);
    assert!((zeta_s1(&form(1.0, 0.5, 1.0)).unwrap() - HEX_Z1).abs() < 1e-13);
    assert!((zeta_s1(&form(4.0, 0.0, 4.0)).unwrap() - SQUARE_Z1 / 2.0).abs() < 1e-13);
    let (z1, z3) = zeta_general(&form(1.0, 0.0, 1.0), 1.0).unwrap();
    assert!((z1 - SQUARE_Z1).abs() < 1e-13);
    assert!(rel(z3, SQUARE_Z3) < 1e-13, "{z3}");
    let (z4, _) = zeta_general(&form(1.0, 0.0, 1.0), 4.0).unwrap();
    assert!(rel(z4, SQUARE_Z4) < 1e-13);
}

#[test]
fn z4_matches_direct_sum() {
    // Σ' over |i|,|j| ≤ n plus the continuum tail outside the box
    let n = 2000_i64;
    let mut s = 0.0;
    for i in -n..=n {
        for j in -n..=n {
            if i != 0 || j != 0 {
                s += 1.0 / ((i * i + j * j) as f64).powi(2);
            }
        }
    }
    let m = n as f64 + 0.5;
    let tail = outside_box_integral() / (m * m);
    let (z4, _) = zeta_general(&form(1.0, 0.0, 1.0), 4.0).unwrap();
    assert!((s + tail - z4).abs() < 1e-10, "{} vs {}", s + tail, z4);
}

/// ∫_{R² ∖ [−1,1]²} (u²+v²)^{-2} du dv = 4 ∫_{-1}^{1} ∫_1^∞ … by homogeneity
/// = (1/2)·4∫_{-1}^{1} (1+t²)^{-2} dt; scale by M^{-2} for [−M,M]².
fn outside_box_integral() -> f64 {
    // ∫_{-1}^{1} (1+t²)^{-2} dt = 1/2 + π/4
    2.0 * (0.5 + std::f64::consts::FRAC_PI_4)
}

#[test]
fn z0_is_minus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let q = random_form(&mut rng, 0.05);
        let (v, _) = zeta_general(&q, 0.0).unwrap();
        assert!((v + 1.0).abs() < 1e-10);
        // the nearby continuation agrees with the limit
        let (near, _) = zeta_general(&q, 1e-7).unwrap();
        assert!((near + 1.0).abs() < 1e-5, "{near}");
    }
}

#[test]
fn pole_is_rejected_and_bounded() {
    assert!(zeta_general(&form(1.0, 0.0, 1.0), 2.0).is_err());
    let vals: Vec<f64> =
        [1.9, 1.99, 1.999].iter().map(|&s| (s - 2.0) * z(1.0, 0.0, 1.0, s)).collect();
    for w in vals.windows(2) {
        assert!((w[1] - w[0]).abs() < 0.5, "{vals:?}");
    }
    // residue 2π/√D
    assert!((vals[2] - 2.0 * std::f64::consts::PI).abs() < 0.05, "{vals:?}");
}

#[test]
fn symmetries_and_homogeneity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let q = random_form(&mut rng, 0.05);
        for &s in &[-1.0, 1.0, 3.0] {
            let base = zeta_general(&q, s).unwrap().0;
            for &c in &[0.5, 2.0, 7.0] {
                let sc = zeta_general(&q.scale(c), s).unwrap().0;
                assert!(rel(sc, c.powf(-s / 2.0) * base) < 1e-12);
            }
            let sw = zeta_general(&q.swapped(), s).unwrap().0;
            assert!((sw - base).abs() < 1e-13 * base.abs().max(1.0));
            let fl = zeta_general(&form(q.e, -q.f, q.g), s).unwrap().0;
            assert!((fl - base).abs() < 1e-13 * base.abs().max(1.0));
        }
    }
}

#[test]
fn truncation_is_sufficient() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let wide = ZetaOptions { x_cut: 66.0 };
    for _ in 0..100 {
        let q = random_form(&mut rng, 0.05);
        let a = zeta_s1(&q).unwrap();
        let b = zeta_s1_with(&q, &wide).unwrap();
        assert!((a - b).abs() < 1e-14, "{a} {b}");
        let a = zeta_general(&q, -1.0).unwrap().0;
        let b = zeta_general_with(&q, -1.0, &wide).unwrap().0;
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn incomplete_gamma_values() {
    // ∫₁^∞ t^{-1/2} e^{-πt} dt and ∫₁^∞ t^{-3/2} e^{-2πt} dt
    assert!(rel(g_scaled(0.5, 1.0).unwrap(), 0.012_188_882_184_802_887) < 1e-12);
    assert!(rel(g_scaled(-0.5, 2.0).unwrap(), 2.449_956_881_183_031e-4) < 1e-12);
    let (a, _) = gamma_chain(-0.5, 2.0, 1).unwrap();
    assert!(rel(a[0], 2.449_956_881_183_031e-4) < 1e-12);
    for &x in &[0.01, 0.2, 1.0, 3.7, 9.5] {
        let g = g_scaled(0.5, x).unwrap();
        let y = std::f64::consts::PI * x;
        assert!(g > 0.0 && g < (-y).exp() / y);
        let g32 = g_scaled(1.5, x).unwrap();
        assert!(rel(g32, (0.5 * g + (-y).exp()) / y) < 1e-14);
        for &s1 in &[0.5, -0.5] {
            let (a, b) = gamma_chain(s1, x, 4).unwrap();
            for j in 0..=4 {
                assert!(rel(a[j], g_scaled(s1 + j as f64, x).unwrap()) < 1e-13);
                assert!(rel(b[j], g_scaled(1.0 - s1 + j as f64, x).unwrap()) < 1e-13);
                if s1 > 0.0 {
                    assert!(a[j] > 0.0);
                }
            }
        }
        // non-half-integer path against the half-integer recurrence
        let near = g_scaled(0.5 + 1e-9, x).unwrap();
        assert!(rel(near, g) < 1e-7);
    }
    assert!(g_scaled(0.5, 0.0).is_err());
    assert!(gamma_chain(0.3, 1.0, 2).is_err());
    assert!(gamma_chain(0.5, 1.0, 5).is_err());
}

#[test]
fn dlp_zeta_identities() {
    let q = form(1.3, 0.2, 0.8);
    assert!(zeta_dlp(&q, &DerivDirection::default()).unwrap().abs() < 1e-15);
    for &c in &[0.5, 1.0, 3.0] {
        let b = DerivDirection::new(c * q.e, c * q.f, c * q.g);
        let want = c / 2.0 * zeta_s1(&q).unwrap();
        assert!(rel(zeta_dlp(&q, &b).unwrap(), want) < 1e-13);
    }
    let b = DerivDirection::new(0.4, -0.7, 1.1);
    let hs = 1e-5;
    let fd = |de: f64, df: f64, dg: f64| {
        (z(q.e + de * hs, q.f + df * hs, q.g + dg * hs, 1.0) - z(q.e - de * hs, q.f - df * hs, q.g - dg * hs, 1.0))
            / (2.0 * hs)
    };
    let want = -(b.l * fd(1.0, 0.0, 0.0) + b.m * fd(0.0, 1.0, 0.0) + b.n * fd(0.0, 0.0, 1.0));
    assert!(rel(zeta_dlp(&q, &b).unwrap(), want) < 1e-6);
}

/// k-th central difference of zeta_general along E, Richardson-extrapolated.
fn fd_e(q: &QuadraticForm, s: f64, k: usize, h: f64) -> f64 {
    let stencil = |h: f64| -> f64 {
        let f = |t: f64| z(q.e + t * h, q.f, q.g, s);
        match k {
            1 => (f(1.0) - f(-1.0)) / (2.0 * h),
            2 => (f(1.0) - 2.0 * f(0.0) + f(-1.0)) / (h * h),
            3 => (f(2.0) - 2.0 * f(1.0) + 2.0 * f(-1.0) - f(-2.0)) / (2.0 * h.powi(3)),
            4 => (f(2.0) - 4.0 * f(1.0) + 6.0 * f(0.0) - 4.0 * f(-1.0) + f(-2.0)) / h.powi(4),
            _ => unreachable!(),
        }
    };
    (4.0 * stencil(h / 2.0) - stencil(h)) / 3.0
}

#[test]
fn scalar_derivatives_match_finite_differences() {
    let dir = DerivDirection::new(1.0, 0.0, 0.0);
    for (q, s) in [(form(0.6, 0.2, 1.5), -1.0), (form(0.9, -0.3, 1.4), 1.0), (form(2.0, 0.5, 1.0), 0.6)] {
        for (k, h, tol) in [(1, 2e-3, 1e-6), (2, 2e-3, 1e-6), (3, 2e-2, 1e-3), (4, 4e-2, 1e-3)] {
            let got = deriv_scalar(&q, &dir, k, s).unwrap();
            let want = fd_e(&q, s, k, h);
            assert!(rel(got, want) < tol, "k={k} s={s}: {got} vs {want}");
        }
    }
}

#[test]
fn first_derivative_is_linear_in_direction() {
    let q = form(1.1, 0.35, 0.7);
    let d = |l, m, n| deriv_scalar(&q, &DerivDirection::new(l, m, n), 1, -1.0).unwrap();
    assert!((d(1.0, 0.0, 1.0) - d(1.0, 0.0, 0.0) - d(0.0, 0.0, 1.0)).abs() < 1e-12);
    assert!((d(2.0, -0.5, 0.3) - 2.0 * d(1.0, 0.0, 0.0) + 0.5 * d(0.0, 1.0, 0.0) - 0.3 * d(0.0, 0.0, 1.0)).abs() < 1e-12);
}

#[test]
fn mixed_operator_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..20 {
        let q = random_form(&mut rng, 0.1);
        let s = [-1.0, 1.0, 3.0, -0.4, 0.7][rng.random_range(0..5)];
        let d2 = |l, m, n| deriv_scalar(&q, &DerivDirection::new(l, m, n), 2, s).unwrap();
        let eg = (d2(1.0, 0.0, 1.0) - d2(1.0, 0.0, 0.0) - d2(0.0, 0.0, 1.0)) / 2.0;
        let ff = d2(0.0, 1.0, 0.0);
        assert!((eg - ff / 4.0).abs() < 1e-11 * ff.abs().max(1.0), "{eg} {ff}");
    }
}

#[test]
fn vector_derivatives() {
    let q = form(1.2, -0.25, 0.9);
    let s = -1.0;
    let b = ZetaBundle::new(&q, s).unwrap();
    // second-order reconstruction
    let (l, m, n) = (0.7, -0.4, 1.3);
    let v = b.v2;
    let want = l * l * v[0] + 4.0 * l * m * v[1] + (4.0 * m * m + 2.0 * l * n) * v[2] + 4.0 * m * n * v[3] + n * n * v[4];
    let got = deriv_scalar(&q, &DerivDirection::new(l, m, n), 2, s).unwrap();
    assert!(rel(want, got) < 1e-11);
    assert_eq!(deriv_vector(&q, 3, s).unwrap().entries.len(), 7);
    // E ↔ G symmetry on a conformal form
    let sym = ZetaBundle::new(&form(1.7, 0.0, 1.7), s).unwrap();
    assert!((sym.v1[0] - sym.v1[2]).abs() < 1e-13);
    // each order is the E/G derivative of the one below
    let h = 1e-4;
    let v3 = |e: f64, g: f64| ZetaBundle::new(&form(e, q.f, g), s).unwrap();
    let (ep, em) = (v3(q.e + h, q.g), v3(q.e - h, q.g));
    let (gp, gm) = (v3(q.e, q.g + h), v3(q.e, q.g - h));
    for l in 0..7 {
        let de = (ep.v3[l] - em.v3[l]) / (2.0 * h);
        assert!(rel(b.v4[l], de) < 1e-6, "v4[{l}] {} vs {de}", b.v4[l]);
        let dg = (gp.v3[l] - gm.v3[l]) / (2.0 * h);
        assert!(rel(b.v4[l + 2], dg) < 1e-6, "v4[{}] {} vs {dg}", l + 2, b.v4[l + 2]);
    }
    for l in 0..5 {
        assert!(rel(b.v3[l], (ep.v2[l] - em.v2[l]) / (2.0 * h)) < 1e-6);
    }
    // the companion □⁽¹⁾Z(s+2)
    let (_, dc) = deriv_scalar_pair(&q, &DerivDirection::new(0.0, 0.0, 1.0), 1, s).unwrap();
    assert!((dc - b.v1_next[2]).abs() < 1e-14);
    let fdc = (zeta_general(&form(q.e, q.f, q.g + h), s).unwrap().1 - zeta_general(&form(q.e, q.f, q.g - h), s).unwrap().1)
        / (2.0 * h);
    assert!(rel(dc, fdc) < 1e-6);
}

#[test]
fn derivative_errors() {
    let q = form(1.0, 0.0, 1.0);
    let d = DerivDirection::new(1.0, 0.0, 0.0);
    assert!(deriv_scalar(&q, &d, 0, 1.0).is_err());
    assert!(deriv_scalar(&q, &d, 5, 1.0).is_err());
    assert!(deriv_scalar(&q, &d, 2, 2.0).is_err());
    assert!(deriv_vector(&q, 1, 2.0).is_err());
}

#[test]
fn wigner_oracle_odd_and_divergent() {
    let q = form(1.0, 0.2, 1.3);
    for n in [4, 16, 64] {
        assert_eq!(wigner_oracle(&q, (1, 0), 0, n).unwrap(), 0.0);
    }
    assert!(wigner_oracle(&q, (0, 0), 1, 8).is_err());
}

#[test]
fn wigner_oracle_converges_for_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let q = random_form(&mut rng, 0.3);
        let z1 = zeta_s1(&q).unwrap();
        let errs: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| (wigner_oracle(&q, (0, 0), 0, n).unwrap() - z1).abs()).collect();
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "{errs:?}");
        }
    }
}

#[test]
fn wigner_richardson_square_lattice() {
    let q = form(1.0, 0.0, 1.0);
    let ns = [64usize, 128, 256, 512];
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64 + 0.5).collect();
    let vals: Vec<f64> = ns.iter().map(|&n| wigner_oracle(&q, (0, 0), 0, n).unwrap()).collect();
    let lim = richardson(&xs, &vals, &[-1.0, -3.0]);
    assert!((lim - SQUARE_Z1).abs() < 1e-6, "{lim}");
    let b = ZetaBundle::new(&q, -1.0).unwrap();
    let vals: Vec<f64> = ns.iter().map(|&n| wigner_oracle_em(&q, (2, 0), 0, n).unwrap()).collect();
    let lim = richardson(&xs, &vals, &[-1.0, -3.0]);
    assert!((lim - 2.0 * b.v1[0]).abs() < 1e-5, "{lim} vs {}", 2.0 * b.v1[0]);
}
