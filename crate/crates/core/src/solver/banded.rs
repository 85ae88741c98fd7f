use rayon::prelude::*;

use crate::assembly::BandedMatrix;
use crate::error::{Error, Result};

use super::SINGULAR_TOL;

/// LU factors of a band matrix with row interchanges.
///
/// Row `i` of the working array covers columns `i - kl ..= i + kl + ku`, which
/// leaves room for the fill that pivoting pushes into `U`.
#[derive(Debug, Clone)]
pub struct BandedLU {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    a: Vec<f64>,
    mult: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLU {
    pub fn factor(m: &BandedMatrix) -> Result<Self> {
        let n = m.n();
        let (kl, ku) = (m.lower_bandwidth(), m.upper_bandwidth());
        let width = 2 * kl + ku + 1;
        let mut a = vec![0.0; n * width];
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = m.get(i, j);
                scale = scale.max(v.abs());
                a[i * width + j + kl - i] = v;
            }
        }
        let at = |i: usize, j: usize| i * width + j + kl - i;
        let mut mult = vec![0.0; n * kl];
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let (mut r, mut best) = (k, a[at(k, k)].abs());
            for i in k + 1..=last {
                let v = a[at(i, k)].abs();
                if v > best {
                    r = i;
                    best = v;
                }
            }
            if !(best > SINGULAR_TOL * scale) {
                return Err(Error::Singular { column: k, pivot: best });
            }
            piv[k] = r;
            let jmax = (k + kl + ku).min(n - 1);
            if r != k {
                for j in k..=jmax {
                    a.swap(at(k, j), at(r, j));
                }
            }
            let d = a[at(k, k)];
            for i in k + 1..=last {
                let f = a[at(i, k)] / d;
                mult[k * kl + (i - k - 1)] = f;
                a[at(i, k)] = 0.0;
                if f != 0.0 {
                    for j in k + 1..=jmax {
                        a[at(i, j)] -= f * a[at(k, j)];
                    }
                }
            }
        }
        Ok(Self { n, kl, ku, width, a, mult, piv })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn solve_column(&self, b: &mut [f64]) {
        let (n, kl, w) = (self.n, self.kl, self.width);
        for k in 0..n {
            let r = self.piv[k];
            if r != k {
                b.swap(k, r);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + kl).min(n - 1) {
                    b[i] -= self.mult[k * kl + (i - k - 1)] * bk;
                }
            }
        }
        let reach = kl + self.ku;
        for i in (0..n).rev() {
            let row = &self.a[i * w..(i + 1) * w];
            let mut s = b[i];
            for j in i + 1..=(i + reach).min(n - 1) {
                s -= row[j + kl - i] * b[j];
            }
            b[i] = s / row[kl];
        }
    }

    pub fn solve(&self, b: &mut [f64]) -> Result<()> {
        self.solve_multi_rhs(b, 1)
    }

    /// Solves in place for `ncols` right-hand sides stored column after
    /// column, each of length `n`. Columns are handled in parallel.
    pub fn solve_multi_rhs(&self, data: &mut [f64], ncols: usize) -> Result<()> {
        if data.len() != self.n * ncols {
            return Err(Error::DimensionMismatch(format!(
                "{} values is not {ncols} columns of length {}",
                data.len(),
                self.n
            )));
        }
        if self.n == 0 {
            return Ok(());
        }
        if ncols < 64 {
            data.chunks_mut(self.n).for_each(|c| self.solve_column(c));
        } else {
            data.par_chunks_mut(self.n).for_each(|c| self.solve_column(c));
        }
        Ok(())
    }
}
