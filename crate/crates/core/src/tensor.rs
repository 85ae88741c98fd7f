//! Multi-indexed arrays over tensor-product index sets.
//!
//! Storage is first-axis fastest: entry `(i, j, k)` lives at
//! `i + n_x * (j + n_y * k)`, matching the unknown ordering
//! `u_{1,1,1}, u_{2,1,1}, ...`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    values: Vec<f64>,
}

/// Right-hand sides of tensor-product systems.
pub type RhsTensor = Tensor;
/// Spline coefficients over tensor-product trial bases.
pub type CoefficientTensor = Tensor;

impl Tensor {
    pub fn zeros(dims: &[usize]) -> Self {
        let len = dims.iter().product();
        Self { dims: dims.to_vec(), values: vec![0.0; len] }
    }

    pub fn from_vec(dims: &[usize], values: Vec<f64>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if len != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {len} values, got {}",
                values.len()
            )));
        }
        Ok(Self { dims: dims.to_vec(), values })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0;
        for (&i, &n) in idx.iter().zip(&self.dims).rev() {
            flat = flat * n + i;
        }
        flat
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let f = self.flat_index(idx);
        self.values[f] = v;
    }

    /// Moves the first axis to the back: `(n0, n1, ..., nd)` becomes
    /// `(n1, ..., nd, n0)` with the second axis now fastest.
    pub fn rotate_axes(&self) -> Tensor {
        let n0 = self.dims[0];
        let rest = self.values.len() / n0.max(1);
        let mut out = vec![0.0; self.values.len()];
        for r in 0..rest {
            for i in 0..n0 {
                out[r + rest * i] = self.values[i + n0 * r];
            }
        }
        let mut dims = self.dims[1..].to_vec();
        dims.push(n0);
        Tensor { dims, values: out }
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
