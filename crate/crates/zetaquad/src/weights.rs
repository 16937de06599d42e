//! Correction weights for the punctured trapezoidal rule: the O(h³)
//! single-node weight and the O(h⁵) nine-point stencil, for the Laplace and
//! Helmholtz single layer (SLP), double layer (DLP) and target-normal
//! derivative of the single layer (SLPn).
//!
//! Weights exclude the 1/(4π) kernel constant. Unless a stencil says
//! otherwise they multiply σ·J at the stencil node.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{conv, l_coeffs, LCoeffs, SurfaceJet};
use crate::zeta::{zeta_s1, zeta_s1_and_dlp, DerivDirection, QuadraticForm, ZetaBundle, ZetaOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equation {
    Laplace,
    Helmholtz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    Slp,
    Dlp,
    Slpn,
}

/// Kernel selection; κ is present exactly for Helmholtz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub equation: Equation,
    pub layer: Layer,
    pub kappa: Option<Complex64>,
}

impl KernelSpec {
    pub fn new(equation: Equation, layer: Layer, kappa: Option<Complex64>) -> Result<Self> {
        match (equation, kappa) {
            (Equation::Helmholtz, None) => Err(Error::MissingWavenumber),
            (Equation::Laplace, Some(_)) => Err(Error::Unsupported("Laplace kernels take no wavenumber".into())),
            (Equation::Helmholtz, Some(k)) if !k.re.is_finite() || !k.im.is_finite() || k.im < 0.0 => {
                Err(Error::Domain(format!("wavenumber {k} must be finite with Im κ ≥ 0")))
            }
            _ => Ok(KernelSpec { equation, layer, kappa }),
        }
    }

    pub fn laplace(layer: Layer) -> Self {
        KernelSpec { equation: Equation::Laplace, layer, kappa: None }
    }

    pub fn helmholtz(layer: Layer, kappa: Complex64) -> Result<Self> {
        Self::new(Equation::Helmholtz, layer, Some(kappa))
    }

    /// κ, or zero for Laplace.
    pub fn wavenumber(&self) -> Complex64 {
        self.kappa.unwrap_or_default()
    }

    /// The same kernel with another layer.
    pub fn with_layer(&self, layer: Layer) -> Self {
        KernelSpec { layer, ..*self }
    }

    /// All six kernels, Helmholtz ones at wavenumber κ.
    pub fn all(kappa: Complex64) -> Vec<KernelSpec> {
        let mut out = Vec::new();
        for layer in [Layer::Slp, Layer::Dlp, Layer::Slpn] {
            out.push(KernelSpec::laplace(layer));
            out.push(KernelSpec { equation: Equation::Helmholtz, layer, kappa: Some(kappa) });
        }
        out
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eq = match self.equation {
            Equation::Laplace => "lap",
            Equation::Helmholtz => "helm",
        };
        let layer = match self.layer {
            Layer::Slp => "slp",
            Layer::Dlp => "dlp",
            Layer::Slpn => "slpn",
        };
        write!(f, "{eq}-{layer}")
    }
}

/// Parses `lap-slp`, `helm-dlp`, …; Helmholtz kernels get κ = 0 until set.
impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (eq, layer) = s.split_once('-').ok_or_else(|| Error::Unsupported(format!("kernel name {s:?}")))?;
        let equation = match eq {
            "lap" | "laplace" => Equation::Laplace,
            "helm" | "helmholtz" => Equation::Helmholtz,
            _ => return Err(Error::Unsupported(format!("equation {eq:?}"))),
        };
        let layer = match layer {
            "slp" => Layer::Slp,
            "dlp" => Layer::Dlp,
            "slpn" => Layer::Slpn,
            _ => return Err(Error::Unsupported(format!("layer {layer:?}"))),
        };
        let kappa = (equation == Equation::Helmholtz).then(Complex64::default);
        Ok(KernelSpec { equation, layer, kappa })
    }
}

/// Correction order: O(h³) (one node) or O(h⁵) (nine nodes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Three,
    Five,
}

impl Order {
    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            3 => Ok(Order::Three),
            5 => Ok(Order::Five),
            _ => Err(Error::Unsupported(format!("correction order {k}; expected 3 or 5"))),
        }
    }

    pub fn as_int(&self) -> u32 {
        match self {
            Order::Three => 3,
            Order::Five => 5,
        }
    }

    /// Stencil index K (U₁ or U₂).
    pub fn stencil_index(&self) -> usize {
        match self {
            Order::Three => 1,
            Order::Five => 2,
        }
    }
}

/// Offsets of the nine-point stencil in the order used by the moment system.
pub const U2: [(i32, i32); 9] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1)];

/// (U_K, U_K^flat): |μ|+|ν| ≤ K with max(|μ|,|ν|) < K, and |μ|+|ν| < K.
/// For K = 2 the curved stencil is listed in [`U2`] order.
pub fn stencil_sets(k: usize) -> (Vec<(i32, i32)>, Vec<(i32, i32)>) {
    assert!(k >= 1, "stencil index starts at 1");
    let k = k as i32;
    let mut curved = Vec::new();
    let mut flat = Vec::new();
    for m in -k..=k {
        for n in -k..=k {
            let l1 = m.abs() + n.abs();
            if l1 <= k && m.abs().max(n.abs()) < k {
                curved.push((m, n));
            }
            if l1 < k {
                flat.push((m, n));
            }
        }
    }
    let key = |&(m, n): &(i32, i32)| (m.abs() + n.abs(), m.abs().max(n.abs()), -m, -n);
    curved.sort_by_key(key);
    flat.sort_by_key(key);
    if k == 2 {
        curved = U2.to_vec();
    }
    (curved, flat)
}

/// The six limiting error components fitted by the nine-point stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DQuantities {
    pub d: [Complex64; 6],
    pub order: Order,
    pub kernel: KernelSpec,
}

/// What a stencil weight multiplies at its node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// σ·J (the default)
    DensityJacobian,
    /// σ alone; the unnormalized double-layer numerator carries J already
    Density,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionStencil {
    pub order: Order,
    pub offsets: Vec<(i32, i32)>,
    pub weights: Vec<Complex64>,
    pub convention: Convention,
}

impl CorrectionStencil {
    /// Re-express σ-convention weights in the σ·J convention, given the
    /// Jacobian at each offset.
    pub fn to_density_jacobian(&self, jac: impl Fn(i32, i32) -> f64) -> CorrectionStencil {
        match self.convention {
            Convention::DensityJacobian => self.clone(),
            Convention::Density => CorrectionStencil {
                weights: self.offsets.iter().zip(&self.weights).map(|(&(m, n), w)| w / jac(m, n)).collect(),
                convention: Convention::DensityJacobian,
                ..self.clone()
            },
        }
    }

    pub fn weight(&self, offset: (i32, i32)) -> Option<Complex64> {
        self.offsets.iter().position(|&o| o == offset).map(|k| self.weights[k])
    }
}

fn require_kappa(kernel: &KernelSpec) -> Result<Complex64> {
    match (kernel.equation, kernel.kappa) {
        (Equation::Helmholtz, None) => Err(Error::MissingWavenumber),
        (_, k) => Ok(k.unwrap_or_default()),
    }
}

fn check_spacing(h1: f64, h2: f64) -> Result<()> {
    if h1 > 0.0 && h2 > 0.0 && h1.is_finite() && h2.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("grid spacings must be positive, got {h1}, {h2}")))
    }
}

/// Single-node O(h³) weight, anisotropic spacing allowed.
pub fn tau_oh3(kernel: &KernelSpec, jet: &SurfaceJet, h1: f64, h2: f64) -> Result<Complex64> {
    let kappa = require_kappa(kernel)?;
    check_spacing(h1, h2)?;
    let a = jet.first;
    let (r, ri) = (h1 / h2, h2 / h1);
    let at = QuadraticForm::new(a.e * r, a.f, a.g * ri)?;
    let hh = (h1 * h2).sqrt();
    match kernel.layer {
        Layer::Slp => {
            let z = zeta_s1(&at)?;
            Ok((Complex64::from(-z) + Complex64::i() * kappa * hh) * hh)
        }
        Layer::Dlp | Layer::Slpn => {
            let b = jet.second;
            let bt = DerivDirection::new(b.l * r, b.m, b.n * ri);
            let (_, zab) = zeta_s1_and_dlp(&at, &bt, &ZetaOptions::default())?;
            Ok(Complex64::from(-zab * hh))
        }
    }
}

fn dotv(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// D-quantities at a node with spacing h1 = h2 = h.
pub fn d_quantities(kernel: &KernelSpec, jet: &SurfaceJet, h1: f64, h2: f64) -> Result<DQuantities> {
    require_kappa(kernel)?;
    check_spacing(h1, h2)?;
    if (h1 - h2).abs() > 1e-12 * h1.max(h2) {
        return Err(Error::Anisotropic { h1, h2 });
    }
    let bundle = ZetaBundle::new(&jet.first, -1.0)?;
    d_quantities_from(kernel, &l_coeffs(jet), &bundle, h1)
}

/// D-quantities from precomputed expansion coefficients and the zeta bundle
/// at s = −1 of the node's first fundamental form. One bundle serves every
/// kernel at the node.
pub fn d_quantities_from(kernel: &KernelSpec, l: &LCoeffs, b: &ZetaBundle, h: f64) -> Result<DQuantities> {
    let kappa = require_kappa(kernel)?;
    let (h2, h3) = (h * h, h * h * h);
    let e1 = [1.0, 0.0];
    let e2 = [0.0, 1.0];
    let mut d = match kernel.layer {
        Layer::Slp => {
            let c01 = -(2.0 * dotv(&l.l4a, &b.v2) + dotv(&l.l6a, &b.v3));
            [
                -b.z_next * h + c01 * h3,
                -2.0 * dotv(&conv(&e1, &l.l3a), &b.v2) * h2,
                -2.0 * dotv(&conv(&e2, &l.l3a), &b.v2) * h2,
                -2.0 * b.v1[0] * h,
                -2.0 * b.v1[2] * h,
                -2.0 * b.v1[1] * h,
            ]
        }
        Layer::Dlp | Layer::Slpn => {
            let (l2, l3, l4, l6) = if kernel.layer == Layer::Dlp {
                (&l.l2b[..], &l.l3b[..], &l.l4b[..], &l.l6b[..])
            } else {
                (&l.l2c[..], &l.l3c[..], &l.l4c[..], &l.l6c[..])
            };
            let c01 = dotv(l4, &b.v2) + 2.0 * dotv(l6, &b.v3) + dotv(&conv(&l.l6a, l2), &b.v4);
            let c = |e: &[f64]| {
                2.0 * (dotv(&conv(e, l3), &b.v2) + dotv(&conv(&conv(e, &l.l3a), l2), &b.v3))
            };
            [
                dotv(l2, &b.v1_next) * h + c01 * h3,
                c(&e1) * h2,
                c(&e2) * h2,
                2.0 * dotv(&conv(&[1.0, 0.0, 0.0], l2), &b.v2) * h,
                2.0 * dotv(&conv(&[0.0, 0.0, 1.0], l2), &b.v2) * h,
                2.0 * dotv(&conv(&[0.0, 1.0, 0.0], l2), &b.v2) * h,
            ]
        }
    }
    .map(Complex64::from);
    if kernel.equation == Equation::Helmholtz {
        let kh = kappa * h;
        d[0] += match kernel.layer {
            Layer::Slp => (Complex64::i() * kh + kh * kh / 2.0 * b.z) * h,
            Layer::Dlp => -kh * kh / 2.0 * dotv(&l.l2b, &b.v1) * h,
            Layer::Slpn => -kh * kh / 2.0 * dotv(&l.l2c, &b.v1) * h,
        };
    }
    Ok(DQuantities { d, order: Order::Five, kernel: *kernel })
}

fn convention_of(kernel: &KernelSpec) -> Convention {
    if kernel.layer == Layer::Dlp {
        Convention::Density
    } else {
        Convention::DensityJacobian
    }
}

/// Closed-form nine-point weights.
pub fn solve_stencil(dq: &DQuantities) -> CorrectionStencil {
    let [d0, d1, d2, d3, d4, d5] = dq.d;
    let c = d5 / 4.0;
    let weights = vec![d0 - d3 - d4, (d3 + d1) / 2.0, (d3 - d1) / 2.0, (d4 + d2) / 2.0, (d4 - d2) / 2.0, c, c, -c, -c];
    CorrectionStencil { order: dq.order, offsets: U2.to_vec(), weights, convention: convention_of(&dq.kernel) }
}

/// Rows: moments 1, u, v, u², v², uv of the [`U2`] offsets, then the
/// corner symmetry and normalization conditions.
pub const MOMENT_MATRIX: [[f64; 9]; 9] = [
    [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
    [0.0, 1.0, -1.0, 0.0, 0.0, 1.0, -1.0, 1.0, -1.0],
    [0.0, 0.0, 0.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0],
    [0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
    [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, -1.0, -1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0],
];

/// Weights from a dense LU solve of the moment system (cross-check path).
pub fn solve_stencil_numeric(dq: &DQuantities) -> Result<CorrectionStencil> {
    let a = DMatrix::from_fn(9, 9, |i, j| Complex64::from(MOMENT_MATRIX[i][j]));
    let mut rhs = DVector::from_element(9, Complex64::default());
    for k in 0..6 {
        rhs[k] = dq.d[k];
    }
    let x = a.lu().solve(&rhs).ok_or_else(|| Error::IllPosed("singular moment matrix".into()))?;
    Ok(CorrectionStencil {
        order: dq.order,
        offsets: U2.to_vec(),
        weights: x.iter().copied().collect(),
        convention: convention_of(&dq.kernel),
    })
}

/// Correction stencil for one node: O(h³) single weight or the O(h⁵) nine-point stencil.
pub fn node_stencil(kernel: &KernelSpec, jet: &SurfaceJet, h1: f64, h2: f64, order: Order) -> Result<CorrectionStencil> {
    match order {
        Order::Three => Ok(CorrectionStencil {
            order,
            offsets: vec![(0, 0)],
            weights: vec![tau_oh3(kernel, jet, h1, h2)?],
            convention: Convention::DensityJacobian,
        }),
        Order::Five => Ok(solve_stencil(&d_quantities(kernel, jet, h1, h2)?)),
    }
}
