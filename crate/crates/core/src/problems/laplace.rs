use crate::assembly::{
    apply_dirichlet_values, boundary_rows, laplace_2d_strong, laplace_2d_weak, laplace_rhs,
    mass_1d_galerkin, BcKind, Constant, ScalarField, Side, Tests,
};
use crate::bspline::BasisSpec;
use crate::error::{invalid, Result};
use crate::quadrature::{gauss_legendre, points_for_degree, MAX_POINTS};
use crate::solver::{dense_solve, BandedLU};
use crate::tensor::CoefficientTensor;

use super::{Method, ProblemConfig};

static ZERO: Constant = Constant(0.0);

/// Boundary values on Dirichlet sides and outward normal flux on Neumann
/// sides, both as fields over the plane.
#[derive(Clone, Copy)]
pub struct BoundaryData<'a> {
    pub dirichlet: &'a dyn ScalarField,
    pub flux: &'a dyn ScalarField,
}

impl BoundaryData<'static> {
    pub fn homogeneous() -> Self {
        Self { dirichlet: &ZERO, flux: &ZERO }
    }
}

/// 1D L2 projection of `g` onto `spec`.
pub(crate) fn project_1d(spec: &BasisSpec, g: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let p = spec.degree();
    let m = mass_1d_galerkin(spec, &gauss_legendre(points_for_degree(2 * p))?)?;
    let rule = gauss_legendre((points_for_degree(2 * p) + 2).min(MAX_POINTS))?;
    let mut b = vec![0.0; spec.num_basis()];
    let mut vals = vec![0.0; p + 1];
    for e in 0..spec.num_elements() {
        let (lo, hi) = spec.element_bounds(e);
        let (x, w) = rule.map_to_interval(lo, hi)?;
        for (&xq, &wq) in x.iter().zip(&w) {
            spec.basis_in_element(e, xq, &mut vals);
            let gv = g(xq);
            for (j, v) in vals.iter().enumerate() {
                b[e + j] += wq * gv * v;
            }
        }
    }
    BandedLU::factor(&m)?.solve(&mut b)?;
    Ok(b)
}

/// Coefficients of the Dirichlet sides, in side order; later sides win at
/// shared corners.
fn dirichlet_values(specs: [&BasisSpec; 2], sides: &[Side], g: &dyn ScalarField) -> Result<Vec<(usize, f64)>> {
    let (nx, ny) = (specs[0].num_basis(), specs[1].num_basis());
    let mut out = Vec::new();
    for &side in sides {
        let along = specs[1 - side.axis()];
        let (a, b) = specs[side.axis()].domain();
        let at = if side.is_upper() { b } else { a };
        let c = if side.axis() == 0 {
            project_1d(along, |t| g.value(&[at, t]))?
        } else {
            project_1d(along, |t| g.value(&[t, at]))?
        };
        for (k, v) in c.into_iter().enumerate() {
            let row = match side {
                Side::Left => nx * k,
                Side::Right => nx - 1 + nx * k,
                Side::Bottom => k,
                Side::Top => k + nx * (ny - 1),
            };
            out.push((row, v));
        }
    }
    Ok(out)
}

/// Solves `-Δu = f` on a 2D box with the configured boundary conditions.
pub fn laplace_solve(cfg: &ProblemConfig, f: &dyn ScalarField, bd: BoundaryData) -> Result<CoefficientTensor> {
    if cfg.dim() != 2 {
        return Err(invalid("the Laplace driver is two-dimensional"));
    }
    let dir = cfg.bc.sides(BcKind::Dirichlet);
    let neu = cfg.bc.sides(BcKind::Neumann);
    if dir.is_empty() {
        return Err(invalid("pure Neumann problems are singular; mark at least one side D"));
    }
    let specs = [&cfg.specs[0], &cfg.specs[1]];
    let p = specs[0].degree().max(specs[1].degree());
    let n = points_for_degree(2 * p).max(cfg.rhs_rule(0, f.poly_degree())?.len());
    let rule = gauss_legendre(n.min(MAX_POINTS))?;
    let (mut a, mut b) = match cfg.method {
        Method::Galerkin => {
            let t = Tests::BSpline;
            (laplace_2d_weak(specs, &rule)?, laplace_rhs(specs, [&t, &t], &rule, f, &neu, bd.flux)?)
        }
        Method::Pwc => {
            let sets = cfg.test_sets();
            let tx = Tests::Pwc(sets[0].clone());
            let ty = Tests::Pwc(sets[1].clone());
            (
                laplace_2d_strong(specs, [&tx, &ty], &rule, &neu)?,
                laplace_rhs(specs, [&tx, &ty], &rule, f, &neu, bd.flux)?,
            )
        }
    };
    let (nx, ny) = (specs[0].num_basis(), specs[1].num_basis());
    let rows = boundary_rows(nx, ny, &dir);
    let mut value = vec![0.0; nx * ny];
    for (r, v) in dirichlet_values(specs, &dir, bd.dirichlet)? {
        value[r] = v;
    }
    let vals: Vec<f64> = rows.iter().map(|&r| value[r]).collect();
    apply_dirichlet_values(&mut a, &mut b, &rows, &vals)?;
    let u = dense_solve(&a, &b)?;
    CoefficientTensor::from_vec(&[nx, ny], u)
}
