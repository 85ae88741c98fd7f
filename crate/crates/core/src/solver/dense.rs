use crate::assembly::DenseMatrix;
use crate::error::{Error, Result};

use super::SINGULAR_TOL;

/// Row-permuted LU factors of a dense square matrix.
#[derive(Debug, Clone)]
pub struct DenseLU {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

/// In-place elimination; returns the absolute pivots. Columns without a
/// usable pivot are skipped so the caller sees a zero.
fn eliminate(lu: &mut [f64], perm: &mut [usize], n: usize) -> Vec<f64> {
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let (mut r, mut best) = (k, lu[k * n + k].abs());
        for i in k + 1..n {
            let v = lu[i * n + k].abs();
            if v > best {
                r = i;
                best = v;
            }
        }
        pivots.push(best);
        if best == 0.0 {
            continue;
        }
        if r != k {
            for j in 0..n {
                lu.swap(k * n + j, r * n + j);
            }
            perm.swap(k, r);
        }
        let d = lu[k * n + k];
        for i in k + 1..n {
            let m = lu[i * n + k] / d;
            lu[i * n + k] = m;
            if m != 0.0 {
                for j in k + 1..n {
                    lu[i * n + j] -= m * lu[k * n + j];
                }
            }
        }
    }
    pivots
}

/// Absolute pivots of LU with partial pivoting; never fails.
pub fn lu_pivots(a: &DenseMatrix) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.rows();
    let mut lu = a.as_slice().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    eliminate(&mut lu, &mut perm, n)
}

impl DenseLU {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot factor a {}x{} matrix",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let scale = a.max_abs();
        let mut lu = a.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let pivots = eliminate(&mut lu, &mut perm, n);
        if let Some((column, &pivot)) =
            pivots.iter().enumerate().find(|(_, &p)| !(p > SINGULAR_TOL * scale))
        {
            return Err(Error::Singular { column, pivot });
        }
        Ok(Self { n, lu, perm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} entries, got {}", b.len())));
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }
}
