use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::TorusGrid;
use super::kernel::radial;
use crate::error::{Error, Result};
use crate::geometry::{dot, l_coeffs, norm, sub};
use crate::weights::{d_quantities_from, solve_stencil, tau_oh3, Equation, KernelSpec, Layer, Order};
use crate::zeta::ZetaBundle;

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

/// Largest grid for which a dense matrix is assembled.
pub const DENSE_LIMIT: usize = 4096;

/// How the operator applies itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Storage {
    /// Recompute every kernel entry on each apply.
    MatrixFree,
    /// Dense N × N matrix.
    Dense,
    /// For surfaces invariant under u-translation: one block row per v index
    /// (N_v · N entries), reused by rotation.
    Rotational,
}

/// shift·I + Σ_t c_t K_t with every K_t a corrected layer potential of one
/// equation on a periodic grid.
pub struct NystromOperator {
    grid: Arc<TorusGrid>,
    equation: Equation,
    kappa: Complex64,
    terms: Vec<(Layer, Complex64)>,
    shift: Complex64,
    order: Order,
    /// Per target: (source index, coefficient of σ_source) from the corrections.
    corrections: Vec<Vec<(usize, Complex64)>>,
    storage: Storage,
    table: Vec<Complex64>,
}

impl std::fmt::Debug for NystromOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NystromOperator")
            .field("grid", &self.grid)
            .field("terms", &self.terms)
            .field("shift", &self.shift)
            .field("order", &self.order)
            .field("storage", &self.storage)
            .finish()
    }
}

/// Corrected operator for a single layer potential, stored per
/// [`Storage`] default rules.
pub fn build_operator(grid: Arc<TorusGrid>, spec: &KernelSpec, order: Order) -> Result<NystromOperator> {
    NystromOperator::combination(grid, spec, &[(spec.layer, Complex64::from(1.0))], Complex64::default(), order)
}

impl NystromOperator {
    /// Build shift·I + Σ c_t K_t. `spec` supplies the equation and κ; its
    /// layer is ignored in favour of the listed terms.
    pub fn combination(
        grid: Arc<TorusGrid>,
        spec: &KernelSpec,
        terms: &[(Layer, Complex64)],
        shift: Complex64,
        order: Order,
    ) -> Result<Self> {
        Self::combination_with(grid, spec, terms, shift, order, true)
    }

    /// As [`combination`](Self::combination); `corrected = false` leaves the
    /// punctured trapezoidal rule unmodified.
    pub fn combination_with(
        grid: Arc<TorusGrid>,
        spec: &KernelSpec,
        terms: &[(Layer, Complex64)],
        shift: Complex64,
        order: Order,
        corrected: bool,
    ) -> Result<Self> {
        if spec.equation == Equation::Helmholtz && spec.kappa.is_none() {
            return Err(Error::MissingWavenumber);
        }
        let k = order.stencil_index();
        if grid.nu < 2 * k + 1 || grid.nv < 2 * k + 1 {
            return Err(Error::Resolution(format!(
                "{} × {} grid for a {}-point stencil",
                grid.nu,
                grid.nv,
                if k == 1 { 1 } else { 9 }
            )));
        }
        if order == Order::Five && (grid.h1 - grid.h2).abs() > 1e-12 * grid.h1 {
            return Err(Error::Anisotropic { h1: grid.h1, h2: grid.h2 });
        }
        let rotational = grid.surface.rotational_in_u();
        let corrections = if corrected {
            node_corrections(&grid, spec, terms, order, rotational)?
        } else {
            vec![Vec::new(); grid.len()]
        };
        let mut op = NystromOperator {
            grid,
            equation: spec.equation,
            kappa: spec.wavenumber(),
            terms: terms.to_vec(),
            shift,
            order,
            corrections,
            storage: Storage::MatrixFree,
            table: Vec::new(),
        };
        if rotational {
            op.table = op.rotational_table();
            op.storage = Storage::Rotational;
        }
        Ok(op)
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn storage(&self) -> Storage {
        self.storage
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Correction coefficients (source index, multiplier of σ) at one target.
    pub fn corrections(&self, target: usize) -> &[(usize, Complex64)] {
        &self.corrections[target]
    }

    /// Switch to matrix-free application and drop any stored matrix.
    pub fn into_matrix_free(mut self) -> Self {
        self.storage = Storage::MatrixFree;
        self.table = Vec::new();
        self
    }

    /// Assemble and keep the dense matrix (N ≤ [`DENSE_LIMIT`]).
    pub fn into_dense(mut self) -> Result<Self> {
        self.table = self.assemble_dense()?;
        self.storage = Storage::Dense;
        Ok(self)
    }

    /// Uncorrected row entry: Σ_t c_t K_t(x_i, x_j) J_j h1 h2, i ≠ j.
    #[inline]
    fn punctured_entry(&self, i: usize, j: usize) -> Complex64 {
        let g = &self.grid;
        let d = sub(&g.pos[i], &g.pos[j]);
        let r = norm(&d);
        let (s, p) = radial(self.equation, self.kappa, r);
        let mut acc = Complex64::default();
        for &(layer, c) in &self.terms {
            acc += c * match layer {
                Layer::Slp => s,
                Layer::Dlp => p * dot(&d, &g.nrm[j]),
                Layer::Slpn => -p * dot(&d, &g.nrm[i]),
            };
        }
        acc * (g.jac[j] * g.h1 * g.h2)
    }

    /// Full matrix entry (i, j).
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let mut v = if i == j { self.shift } else { self.punctured_entry(i, j) };
        for &(src, w) in &self.corrections[i] {
            if src == j {
                v += w;
            }
        }
        v
    }

    fn rotational_table(&self) -> Vec<Complex64> {
        let n = self.len();
        let nv = self.grid.nv;
        let mut table = vec![Complex64::default(); nv * n];
        table.par_chunks_mut(n).enumerate().for_each(|(b, row)| {
            let i = self.grid.index(0, b);
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.entry(i, j);
            }
        });
        table
    }

    /// Dense row-major matrix.
    pub fn assemble_dense(&self) -> Result<Vec<Complex64>> {
        let n = self.len();
        if n > DENSE_LIMIT {
            return Err(Error::Unsupported(format!("dense assembly of {n} nodes exceeds {DENSE_LIMIT}")));
        }
        let mut m = vec![Complex64::default(); n * n];
        m.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.entry(i, j);
            }
        });
        Ok(m)
    }

    fn check_len(&self, sigma: &[Complex64]) -> Result<()> {
        if sigma.len() != self.len() {
            return Err(Error::Length { expected: self.len(), got: sigma.len() });
        }
        Ok(())
    }

    /// Operator action using the stored representation.
    pub fn apply(&self, sigma: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(sigma)?;
        match self.storage {
            Storage::MatrixFree => self.apply_matrix_free(sigma),
            Storage::Dense => {
                let n = self.len();
                Ok(self.table.par_chunks(n).map(|row| row.iter().zip(sigma).map(|(a, b)| a * b).sum()).collect())
            }
            Storage::Rotational => Ok(self.apply_rotational(sigma)),
        }
    }

    fn apply_rotational(&self, sigma: &[Complex64]) -> Vec<Complex64> {
        let (nu, nv) = (self.grid.nu, self.grid.nv);
        let n = self.len();
        (0..n)
            .into_par_iter()
            .map(|t| {
                let (a, b) = (t / nv, t % nv);
                let row = &self.table[b * n..(b + 1) * n];
                let mut acc = Complex64::default();
                for c in 0..nu {
                    let shifted = (c + nu - a) % nu;
                    let blk = &row[shifted * nv..(shifted + 1) * nv];
                    let s = &sigma[c * nv..(c + 1) * nv];
                    for (x, y) in blk.iter().zip(s) {
                        acc += x * y;
                    }
                }
                acc
            })
            .collect()
    }

    /// Operator action recomputing all kernel values.
    pub fn apply_matrix_free(&self, sigma: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(sigma)?;
        let n = self.len();
        Ok((0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = self.shift * sigma[i];
                for j in 0..n {
                    if j != i {
                        acc += self.punctured_entry(i, j) * sigma[j];
                    }
                }
                for &(src, w) in &self.corrections[i] {
                    acc += w * sigma[src];
                }
                acc
            })
            .collect())
    }
}

/// Per-node correction coefficients, folded over the listed layers, in
/// the σ convention with the 1/(4π) constant applied.
fn node_corrections(
    grid: &TorusGrid,
    spec: &KernelSpec,
    terms: &[(Layer, Complex64)],
    order: Order,
    rotational: bool,
) -> Result<Vec<Vec<(usize, Complex64)>>> {
    let nv = grid.nv;
    // on a rotational surface the weights depend on the v index only
    let distinct: Vec<usize> = if rotational { (0..nv).collect() } else { (0..grid.len()).collect() };
    let per: Vec<Result<Vec<((i32, i32), Complex64)>>> = distinct
        .par_iter()
        .map(|&i| {
            let (a, b) = (i / nv, i % nv);
            let jet = &grid.jets[i];
            let mut out: Vec<((i32, i32), Complex64)> = Vec::new();
            let mut push = |off: (i32, i32), w: Complex64| {
                if let Some(e) = out.iter_mut().find(|e| e.0 == off) {
                    e.1 += w;
                } else {
                    out.push((off, w));
                }
            };
            match order {
                Order::Three => {
                    for &(layer, c) in terms {
                        let w = tau_oh3(&spec.with_layer(layer), jet, grid.h1, grid.h2)?;
                        push((0, 0), c * w * jet.jac / FOUR_PI);
                    }
                }
                Order::Five => {
                    let bundle = ZetaBundle::new(&jet.first, -1.0)?;
                    let l = l_coeffs(jet);
                    for &(layer, c) in terms {
                        let st = solve_stencil(&d_quantities_from(&spec.with_layer(layer), &l, &bundle, grid.h1)?)
                            .to_density_jacobian(|m, n| grid.jac[grid.wrap(a, b, m, n)]);
                        for (&(m, n), w) in st.offsets.iter().zip(&st.weights) {
                            push((m, n), c * w * grid.jac[grid.wrap(a, b, m, n)] / FOUR_PI);
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let per: Vec<Vec<((i32, i32), Complex64)>> = per.into_iter().collect::<Result<_>>()?;
    let mut all = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (a, b) = (i / nv, i % nv);
        let local = if rotational { &per[b] } else { &per[i] };
        all.push(local.iter().map(|&((m, n), w)| (grid.wrap(a, b, m, n), w)).collect());
    }
    Ok(all)
}
