//! Gauss-Legendre rules on `[-1, 1]` and their affine images.

use std::f64::consts::PI;

use crate::error::{invalid, Result};

/// Largest supported number of Gauss points.
pub const MAX_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadRule {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.len() - 1
    }

    /// Points and weights mapped onto `[lo, hi]`; weights include the Jacobian.
    pub fn map_to_interval(&self, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if !(lo < hi) {
            return Err(invalid(format!("interval [{lo}, {hi}] is empty")));
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let pts = self.points.iter().map(|&x| mid + half * x).collect();
        let wts = self.weights.iter().map(|&w| half * w).collect();
        Ok((pts, wts))
    }

    /// Integral of `f` over `[lo, hi]`.
    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        let (pts, wts) = self.map_to_interval(lo, hi)?;
        Ok(pts.iter().zip(&wts).map(|(&x, &w)| w * f(x)).sum())
    }
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss-Legendre rule, exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> Result<QuadRule> {
    if !(1..=MAX_POINTS).contains(&n) {
        return Err(invalid(format!("Gauss rule size {n} outside 1..={MAX_POINTS}")));
    }
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Chebyshev-angle seed for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[i] = -x;
        points[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    Ok(QuadRule { points, weights })
}

/// Smallest Gauss point count exact for polynomials of degree `d`.
pub fn points_for_degree(d: usize) -> usize {
    d / 2 + 1
}
