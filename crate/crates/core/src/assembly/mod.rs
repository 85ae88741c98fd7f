//! Element-loop assembly of Galerkin and piece-wise constant Petrov-Galerkin
//! systems.

mod field;
mod laplace;
mod matrix;
mod one_d;
mod rhs;

pub use field::{Constant, PolyProduct, ScalarField};
pub use laplace::{
    boundary_rows, laplace_2d_strong, laplace_2d_weak, laplace_rhs, BcKind, BoundaryConditions,
    Side, Tests,
};
pub use matrix::{BandedMatrix, DenseMatrix, SparseMatrix, SquareMatrix};
pub use one_d::{
    mass_1d_galerkin, mass_1d_pwc, pwc_1d, refined_test_matrix, stiffness_1d_galerkin,
};
pub use rhs::{rhs_galerkin, rhs_galerkin_counted, rhs_pwc, rhs_pwc_counted};

use crate::error::{Error, Result};
use crate::quadrature::{points_for_degree, QuadRule};
use crate::testspace::RowSummationPlan;

/// Exact work tallies gathered during assembly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WorkCounters {
    /// Quadrature-point visits in the innermost loop.
    pub quad_points: u64,
    /// One-dimensional test-function evaluations.
    pub basis_evals: u64,
}

pub(crate) fn require_exact(rule: &QuadRule, degree: usize) -> Result<()> {
    let needed = points_for_degree(degree);
    if rule.len() < needed {
        return Err(Error::InsufficientQuadrature { needed, got: rule.len() });
    }
    Ok(())
}

/// Replaces `rows` by unit rows and zeroes their right-hand side entries.
pub fn apply_dirichlet(system: &mut SparseMatrix, rhs: &mut [f64], rows: &[usize]) -> Result<()> {
    apply_dirichlet_values(system, rhs, rows, &vec![0.0; rows.len()])
}

/// As [`apply_dirichlet`] but prescribing `values[i]` for `rows[i]`.
pub fn apply_dirichlet_values(
    system: &mut SparseMatrix,
    rhs: &mut [f64],
    rows: &[usize],
    values: &[f64],
) -> Result<()> {
    if rhs.len() != system.n_rows() || values.len() != rows.len() {
        return Err(Error::DimensionMismatch("rhs or values length".into()));
    }
    system.set_unit_rows(rows)?;
    for (&r, &v) in rows.iter().zip(values) {
        rhs[r] = v;
    }
    Ok(())
}

/// Sums the rows of `rect` (and `rhs`) over each kept set of `plan`.
pub fn sum_rows(
    rect: &SparseMatrix,
    rhs: &[f64],
    plan: &RowSummationPlan,
) -> Result<(DenseMatrix, Vec<f64>)> {
    let ns = plan.refined_spec().num_basis();
    if rect.n_rows() != ns || rhs.len() != ns {
        return Err(Error::DimensionMismatch(format!(
            "plan has {ns} refined rows, matrix {} and rhs {}",
            rect.n_rows(),
            rhs.len()
        )));
    }
    let sets = plan.selected_sets();
    let mut out = DenseMatrix::zeros(sets.len(), rect.n_cols());
    let mut b = vec![0.0; sets.len()];
    for (i, &(lo, hi)) in sets.iter().enumerate() {
        for m in lo..=hi {
            for (j, v) in rect.row(m) {
                out.add(i, j, v);
            }
            b[i] += rhs[m];
        }
    }
    Ok((out, b))
}
