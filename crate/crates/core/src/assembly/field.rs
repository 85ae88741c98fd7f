use crate::error::{Error, Result};

/// A scalar function on `R^dim`.
pub trait ScalarField: Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Per-axis polynomial degree, when the field is a polynomial.
    fn poly_degree(&self) -> Option<usize> {
        None
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> ScalarField for F {
    fn value(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn value(&self, _: &[f64]) -> f64 {
        self.0
    }

    fn poly_degree(&self) -> Option<usize> {
        Some(0)
    }
}

/// Product of one polynomial per axis, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyProduct {
    coeffs: Vec<Vec<f64>>,
}

impl PolyProduct {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("each axis needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// `Π_axis (1 + x + x^2 + x^3)`.
    pub fn tri_cubic(dim: usize) -> Self {
        Self { coeffs: vec![vec![1.0; 4]; dim] }
    }

    pub fn coeffs(&self) -> &[Vec<f64>] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// One axis per non-empty line, whitespace-separated coefficients.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl ScalarField for PolyProduct {
    fn value(&self, x: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(c, &t)| c.iter().rev().fold(0.0, |acc, &a| acc * t + a))
            .product()
    }

    fn poly_degree(&self) -> Option<usize> {
        self.coeffs.iter().map(|c| c.len() - 1).max()
    }
}
