use crate::assembly::{BandedMatrix, DenseMatrix};
use crate::error::{Error, Result};
use crate::tensor::Tensor;

use super::BandedLU;

/// Solves `(M_1 ⊗ ... ⊗ M_d) u = rhs` where axis 0 runs fastest in `rhs`.
///
/// Each sweep solves along the current leading axis with all fibers as
/// right-hand sides, then rotates that axis to the back.
pub fn adi_solve(factors: &[&BandedLU], rhs: &Tensor) -> Result<Tensor> {
    if factors.len() != rhs.ndim() {
        return Err(Error::DimensionMismatch(format!(
            "{} factors for a {}-axis tensor",
            factors.len(),
            rhs.ndim()
        )));
    }
    for (axis, (lu, &n)) in factors.iter().zip(rhs.dims()).enumerate() {
        if lu.n() != n {
            return Err(Error::DimensionMismatch(format!(
                "axis {axis}: factor of size {} against {n} entries",
                lu.n()
            )));
        }
    }
    let mut t = rhs.clone();
    for lu in factors {
        let ncols = t.len() / lu.n().max(1);
        lu.solve_multi_rhs(t.values_mut(), ncols)?;
        t = t.rotate_axes();
    }
    Ok(t)
}

/// Explicit Kronecker product for tests and small oracles; the result acts
/// on vectors ordered with the first factor's index fastest.
pub fn kronecker_dense(factors: &[&BandedMatrix]) -> DenseMatrix {
    let mut out = DenseMatrix::identity(1);
    for f in factors {
        let fd = f.to_dense();
        let (n, m) = (out.rows(), fd.rows());
        let mut next = DenseMatrix::zeros(n * m, n * m);
        for a in 0..m {
            for b in 0..m {
                let v = fd.get(a, b);
                if v == 0.0 {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        next.set(i + n * a, j + n * b, v * out.get(i, j));
                    }
                }
            }
        }
        out = next;
    }
    out
}
