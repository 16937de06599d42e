//! Nyström discretizations on periodic grids: kernels, corrected
//! operators, GMRES, exterior boundary value problems, and the
//! single-target patch rule used for convergence studies.

mod bvp;
mod gmres;
mod grid;
mod kernel;
mod operator;
mod patch;

pub use crate::weights::{Equation, KernelSpec, Layer, Order};
pub use bvp::{default_sources, eval_offsurface, solve_bvp, BoundaryCondition, BvpProblem, BvpSolution, OffSurfaceValue};
pub use gmres::{gmres, GmresResult};
pub use grid::TorusGrid;
pub use kernel::{kernel_eval, kernel_value};
pub use operator::{build_operator, NystromOperator, Storage, DENSE_LIMIT};
pub use patch::{patch_quadrature, PatchDensity};
