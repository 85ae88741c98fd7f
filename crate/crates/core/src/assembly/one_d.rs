use crate::bspline::BasisSpec;
use crate::error::{Error, Result};
use crate::quadrature::QuadRule;
use crate::testspace::PwcTestSet;

use super::matrix::{BandedMatrix, SparseMatrix};
use super::require_exact;

fn galerkin_1d(spec: &BasisSpec, rule: &QuadRule, order: usize) -> Result<BandedMatrix> {
    let p = spec.degree();
    let n = spec.num_basis();
    let mut m = BandedMatrix::zeros(n, p, p);
    for e in 0..spec.num_elements() {
        let (lo, hi) = spec.element_bounds(e);
        let (pts, wts) = rule.map_to_interval(lo, hi)?;
        for (&x, &w) in pts.iter().zip(&wts) {
            let d = &spec.ders_in_element(e, x, order)[order];
            for a in 0..=p {
                for b in 0..=p {
                    m.add(e + a, e + b, w * d[a] * d[b]);
                }
            }
        }
    }
    Ok(m)
}

/// `M_ij = ∫ B_i B_j`.
pub fn mass_1d_galerkin(spec: &BasisSpec, rule: &QuadRule) -> Result<BandedMatrix> {
    require_exact(rule, 2 * spec.degree())?;
    galerkin_1d(spec, rule, 0)
}

/// `K_ij = ∫ B_i' B_j'`.
pub fn stiffness_1d_galerkin(spec: &BasisSpec, rule: &QuadRule) -> Result<BandedMatrix> {
    if spec.degree() == 0 {
        return Err(Error::InvalidArgument("stiffness needs degree >= 1".into()));
    }
    require_exact(rule, 2 * spec.degree() - 2)?;
    galerkin_1d(spec, rule, 1)
}

/// `A_ij = ∫_{I_i} B_j^{(order)}`, one row per test interval.
pub fn pwc_1d(trial: &BasisSpec, tests: &PwcTestSet, rule: &QuadRule, order: usize) -> Result<SparseMatrix> {
    let p = trial.degree();
    if order > p {
        return Err(Error::InvalidArgument(format!("derivative order {order} exceeds degree {p}")));
    }
    require_exact(rule, p - order)?;
    let mut trip = Vec::new();
    for (i, cells) in tests.cells(trial)?.iter().enumerate() {
        for c in cells {
            let (pts, wts) = rule.map_to_interval(c.lo, c.hi)?;
            for (&x, &w) in pts.iter().zip(&wts) {
                let d = &trial.ders_in_element(c.element, x, order)[order];
                for (a, v) in d.iter().enumerate() {
                    trip.push((i, c.element + a, w * v));
                }
            }
        }
    }
    SparseMatrix::from_triplets(tests.len(), trial.num_basis(), trip)
}

/// `M_ij = ∫_{I_i} B_j` as a square band matrix.
pub fn mass_1d_pwc(trial: &BasisSpec, tests: &PwcTestSet, rule: &QuadRule) -> Result<BandedMatrix> {
    if tests.len() != trial.num_basis() {
        return Err(Error::DimensionMismatch(format!(
            "{} test intervals for {} trial functions",
            tests.len(),
            trial.num_basis()
        )));
    }
    pwc_1d(trial, tests, rule, 0)?.to_banded()
}

/// Rectangular mass matrix `∫ B̂_m B_j` with tests from a nested refinement.
pub fn refined_test_matrix(trial: &BasisSpec, refined: &BasisSpec, rule: &QuadRule) -> Result<SparseMatrix> {
    let p = trial.degree();
    let q = refined.degree();
    require_exact(rule, p + q)?;
    let mut trip = Vec::new();
    let mut bt = vec![0.0; p + 1];
    let mut br = vec![0.0; q + 1];
    for f in 0..refined.num_elements() {
        let (lo, hi) = refined.element_bounds(f);
        let e = trial.find_element(0.5 * (lo + hi))?;
        let (t0, t1) = trial.element_bounds(e);
        let tol = 1e-12 * (t1 - t0);
        if lo < t0 - tol || hi > t1 + tol {
            return Err(Error::InvalidArgument("test mesh is not nested in the trial mesh".into()));
        }
        let (pts, wts) = rule.map_to_interval(lo, hi)?;
        for (&x, &w) in pts.iter().zip(&wts) {
            trial.basis_in_element(e, x, &mut bt);
            refined.basis_in_element(f, x, &mut br);
            for (a, &u) in br.iter().enumerate() {
                for (b, &v) in bt.iter().enumerate() {
                    trip.push((f + a, e + b, w * u * v));
                }
            }
        }
    }
    SparseMatrix::from_triplets(refined.num_basis(), trial.num_basis(), trip)
}
