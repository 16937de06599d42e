use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Surface, SurfaceJet, Vec3};

/// Uniform grid on a doubly periodic surface; node (i, j) sits at
/// (u₀ + i h1, v₀ + j h2) and has flat index i·N_v + j.
#[derive(Clone)]
pub struct TorusGrid {
    pub surface: Arc<dyn Surface>,
    pub nu: usize,
    pub nv: usize,
    pub h1: f64,
    pub h2: f64,
    pub jets: Vec<SurfaceJet>,
    pub(crate) pos: Vec<Vec3>,
    pub(crate) nrm: Vec<Vec3>,
    pub(crate) jac: Vec<f64>,
}

impl std::fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusGrid").field("nu", &self.nu).field("nv", &self.nv).finish()
    }
}

impl TorusGrid {
    pub fn new(surface: Arc<dyn Surface>, nu: usize, nv: usize) -> Result<Self> {
        let dom = surface.domain();
        if !dom.periodic_u || !dom.periodic_v {
            return Err(Error::Geometry("periodic grids need a doubly periodic surface".into()));
        }
        if nu < 3 || nv < 3 {
            return Err(Error::Resolution(format!("{nu} × {nv} nodes")));
        }
        let h1 = dom.period_u() / nu as f64;
        let h2 = dom.period_v() / nv as f64;
        let mut jets = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            for j in 0..nv {
                jets.push(surface.jet(dom.u.0 + i as f64 * h1, dom.v.0 + j as f64 * h2)?);
            }
        }
        let pos = jets.iter().map(|j| j.r).collect();
        let nrm = jets.iter().map(|j| j.n).collect();
        let jac = jets.iter().map(|j| j.jac).collect();
        Ok(TorusGrid { surface, nu, nv, h1, h2, jets, pos, nrm, jac })
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }

    /// Flat index of node (i + di, j + dj) with periodic wrap.
    #[inline]
    pub fn wrap(&self, i: usize, j: usize, di: i32, dj: i32) -> usize {
        let a = (i as i64 + di as i64).rem_euclid(self.nu as i64) as usize;
        let b = (j as i64 + dj as i64).rem_euclid(self.nv as i64) as usize;
        self.index(a, b)
    }

    /// Quadrature weight J·h1·h2 at each node.
    pub fn area_weights(&self) -> Vec<f64> {
        self.jac.iter().map(|j| j * self.h1 * self.h2).collect()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.pos
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.nrm
    }
}
