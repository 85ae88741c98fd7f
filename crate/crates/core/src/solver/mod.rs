//! Direct solvers: dense and banded LU with partial pivoting, and the
//! alternating-directions sweep for Kronecker-structured systems.

mod adi;
mod banded;
mod dense;

pub use adi::{adi_solve, kronecker_dense};
pub use banded::BandedLU;
pub use dense::{lu_pivots, DenseLU};

use crate::assembly::SparseMatrix;
use crate::error::{Error, Result};

/// Relative pivot threshold below which a factorization is declared singular.
pub const SINGULAR_TOL: f64 = 1e-14;

/// Direct solve of a general square sparse system. The matrix is copied into
/// band storage, so cost depends on its bandwidth rather than its size.
pub fn dense_solve(a: &SparseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if a.n_rows() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows, rhs of length {}",
            a.n_rows(),
            rhs.len()
        )));
    }
    let lu = BandedLU::factor(&a.to_banded()?)?;
    let mut x = rhs.to_vec();
    lu.solve(&mut x)?;
    Ok(x)
}
