//! In-process equivalence checks with measured norms.

use std::fmt;
use std::str::FromStr;

use crate::assembly::{
    boundary_rows, laplace_2d_strong, laplace_2d_weak, mass_1d_pwc, refined_test_matrix, rhs_galerkin,
    rhs_pwc, sum_rows, PolyProduct, Side, Tests,
};
use crate::bspline::make_uniform_clamped;
use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_legendre, QuadRule};
use crate::testspace::{greville_pwc, plateau_test_set, summation_plan, PwcTestSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    MatrixEquality,
    RowSummation,
    QuadratureReduction,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix_equality" => Ok(Suite::MatrixEquality),
            "row_summation" => Ok(Suite::RowSummation),
            "quadrature_reduction" => Ok(Suite::QuadratureReduction),
            "all" => Ok(Suite::All),
            _ => Err(invalid(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub measured: Vec<(String, f64)>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        for (k, v) in &self.measured {
            write!(f, " {k}={v:.3e}")?;
        }
        Ok(())
    }
}

/// Weak and strong Laplace matrices on an `n x n`, degree `p` mesh, compared
/// on the unknowns away from the boundary. Returns the relative discrepancy.
pub fn matrix_equality(n: usize, p: usize, points: usize) -> Result<f64> {
    let s = make_uniform_clamped(0.0, 1.0, n, p)?;
    let rule = gauss_legendre(points)?;
    let weak = laplace_2d_weak([&s, &s], &rule)?;
    let t = Tests::BSpline;
    let strong = laplace_2d_strong([&s, &s], [&t, &t], &rule, &[])?;
    let nb = s.num_basis();
    let bnd = boundary_rows(nb, nb, &Side::ALL);
    let inner: Vec<usize> = (0..nb * nb).filter(|r| bnd.binary_search(r).is_err()).collect();
    let w = weak.submatrix(&inner, &inner);
    let a = strong.submatrix(&inner, &inner);
    Ok(a.max_abs_diff(&w) / w.max_abs())
}

/// `‖A_summed - A_pwc‖_max` of the 1D mass system for each refinement factor,
/// summing `p * r` neighbours on each side.
pub fn row_summation(n_elems: usize, p: usize, factors: &[usize]) -> Result<Vec<f64>> {
    let trial = make_uniform_clamped(0.0, 1.0, n_elems, p)?;
    let rule = gauss_legendre(p + 1)?;
    factors
        .iter()
        .map(|&r| {
            let plan = summation_plan(&trial, r, p * r)?;
            let rect = refined_test_matrix(&trial, plan.refined_spec(), &rule)?;
            let (summed, _) = sum_rows(&rect, &vec![0.0; rect.n_rows()], &plan)?;
            let tests = plateau_test_set(&trial, &plan)?;
            let pwc = mass_1d_pwc(&trial, &tests, &rule)?.to_dense();
            Ok(summed.max_abs_diff(&pwc))
        })
        .collect()
}

/// Max-norm differences of reduced and reference rules for the tri-cubic
/// load on an `n^3`, degree 2 mesh: `(pwc 2 vs 4 points, galerkin 3 vs 5)`.
pub fn quadrature_reduction(n: usize) -> Result<(f64, f64)> {
    let s = make_uniform_clamped(0.0, 1.0, n, 2)?;
    let f = PolyProduct::tri_cubic(3);
    let t = greville_pwc(&s);
    let specs = [&s, &s, &s];
    let tests: [&PwcTestSet; 3] = [&t, &t, &t];
    let rules = |k: usize| -> Result<QuadRule> { gauss_legendre(k) };
    let (g2, g3, g4, g5) = (rules(2)?, rules(3)?, rules(4)?, rules(5)?);
    let p2 = rhs_pwc(&f, &specs, &tests, &[&g2, &g2, &g2])?;
    let p4 = rhs_pwc(&f, &specs, &tests, &[&g4, &g4, &g4])?;
    let q3 = rhs_galerkin(&f, &specs, &[&g3, &g3, &g3])?;
    let q5 = rhs_galerkin(&f, &specs, &[&g5, &g5, &g5])?;
    Ok((p2.max_abs_diff(&p4), q3.max_abs_diff(&q5)))
}

pub fn verify_equivalence(suite: Suite) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::MatrixEquality | Suite::All) {
        let d = matrix_equality(8, 2, 3)?;
        out.push(CheckReport {
            name: "matrix_equality",
            passed: d <= 1e-10,
            measured: vec![("max_rel_discrepancy".into(), d)],
        });
    }
    if matches!(suite, Suite::RowSummation | Suite::All) {
        let d = row_summation(4, 2, &[2, 4, 8])?;
        let ratios: Vec<f64> = d.windows(2).map(|w| w[1] / w[0]).collect();
        let mut measured: Vec<(String, f64)> = [2, 4, 8].iter().zip(&d).map(|(r, v)| (format!("disc_r{r}"), *v)).collect();
        measured.extend(ratios.iter().enumerate().map(|(i, v)| (format!("ratio{}", i + 1), *v)));
        out.push(CheckReport {
            name: "row_summation",
            passed: ratios.iter().all(|r| (0.4..=0.6).contains(r)),
            measured,
        });
    }
    if matches!(suite, Suite::QuadratureReduction | Suite::All) {
        let (pwc, gal) = quadrature_reduction(16)?;
        out.push(CheckReport {
            name: "quadrature_reduction",
            passed: pwc <= 1e-13 && gal <= 1e-13,
            measured: vec![("pwc_2_vs_4".into(), pwc), ("galerkin_3_vs_5".into(), gal)],
        });
    }
    Ok(out)
}
