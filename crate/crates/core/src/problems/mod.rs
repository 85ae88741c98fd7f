//! Drivers for projection, Laplace, heat and bitmap problems.

mod bitmap;
mod config;
mod eval;
mod heat;
mod laplace;
mod projection;

pub use bitmap::{bitmap_project, BitmapResult};
pub use config::{Method, ProblemConfig};
pub use eval::{evaluate, grid_points, l2_error, FieldSample};
pub use heat::{FactorPath, HeatStepper};
pub use laplace::{laplace_solve, BoundaryData};
pub use projection::{l2_project, mass_factors, pwc_mass_factors};

use crate::assembly::SparseMatrix;

/// `(A ⊗ B) u` for `u` laid out with the first index fastest.
pub(crate) fn apply_kron_2d(a: &SparseMatrix, b: &SparseMatrix, u: &[f64]) -> Vec<f64> {
    let (nx, ny) = (a.n_cols(), b.n_cols());
    let (mx, my) = (a.n_rows(), b.n_rows());
    debug_assert_eq!(u.len(), nx * ny);
    // along x for every column j
    let mut t = vec![0.0; mx * ny];
    for j in 0..ny {
        let col = &u[j * nx..(j + 1) * nx];
        for i in 0..mx {
            t[i + mx * j] = a.row(i).map(|(k, v)| v * col[k]).sum();
        }
    }
    let mut out = vec![0.0; mx * my];
    for jj in 0..my {
        for (j, v) in b.row(jj) {
            let src = &t[j * mx..(j + 1) * mx];
            let dst = &mut out[jj * mx..(jj + 1) * mx];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += v * s;
            }
        }
    }
    out
}
