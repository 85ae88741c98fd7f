use crate::bspline::BasisSpec;
use crate::error::{Error, Result};
use crate::quadrature::QuadRule;
use crate::tensor::RhsTensor;
use crate::testspace::PwcTestSet;

use super::{ScalarField, WorkCounters};

/// Per-element quadrature data on one axis; unused axes become a single
/// unit point so every loop nest is three deep.
struct GalerkinAxis {
    n_basis: usize,
    n_local: usize,
    pts: Vec<Vec<f64>>,
    wts: Vec<Vec<f64>>,
    // vals[e][local][q]
    vals: Vec<Vec<Vec<f64>>>,
}

impl GalerkinAxis {
    fn new(spec: &BasisSpec, rule: &QuadRule) -> Result<Self> {
        let p = spec.degree();
        let mut pts = Vec::new();
        let mut wts = Vec::new();
        let mut vals = Vec::new();
        let mut buf = vec![0.0; p + 1];
        for e in 0..spec.num_elements() {
            let (lo, hi) = spec.element_bounds(e);
            let (x, w) = rule.map_to_interval(lo, hi)?;
            let mut v = vec![vec![0.0; x.len()]; p + 1];
            for (q, &xq) in x.iter().enumerate() {
                spec.basis_in_element(e, xq, &mut buf);
                for j in 0..=p {
                    v[j][q] = buf[j];
                }
            }
            pts.push(x);
            wts.push(w);
            vals.push(v);
        }
        Ok(Self { n_basis: spec.num_basis(), n_local: p + 1, pts, wts, vals })
    }

    fn unit() -> Self {
        Self { n_basis: 1, n_local: 1, pts: vec![vec![0.0]], wts: vec![vec![1.0]], vals: vec![vec![vec![1.0]]] }
    }
}

fn check_dims(dim: usize, rules: usize) -> Result<()> {
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidArgument(format!("dimension {dim} outside 1..=3")));
    }
    if rules != dim {
        return Err(Error::DimensionMismatch(format!("{rules} rules for {dim} axes")));
    }
    Ok(())
}

/// `∫ f Π B` with the loop order element, local test function, quadrature
/// point; `f` is evaluated afresh for every test function.
pub fn rhs_galerkin_counted(
    f: &dyn ScalarField,
    specs: &[&BasisSpec],
    rules: &[&QuadRule],
) -> Result<(RhsTensor, WorkCounters)> {
    let dim = specs.len();
    check_dims(dim, rules.len())?;
    let mut axes = Vec::with_capacity(3);
    for (s, r) in specs.iter().zip(rules) {
        axes.push(GalerkinAxis::new(s, r)?);
    }
    while axes.len() < 3 {
        axes.push(GalerkinAxis::unit());
    }
    let (ax, ay, az) = (&axes[0], &axes[1], &axes[2]);
    let (nx, ny) = (ax.n_basis, ay.n_basis);
    let dims: Vec<usize> = axes[..dim].iter().map(|a| a.n_basis).collect();
    let mut out = RhsTensor::zeros(&dims);
    let l = out.values_mut();
    let mut work = WorkCounters::default();
    let per_fn = (ax.pts[0].len() * ay.pts[0].len() * az.pts[0].len()) as u64;
    let mut x = [0.0; 3];
    for ez in 0..az.pts.len() {
        for ey in 0..ay.pts.len() {
            for ex in 0..ax.pts.len() {
                for kz in 0..az.n_local {
                    for ky in 0..ay.n_local {
                        for kx in 0..ax.n_local {
                            let irow = (ex + kx) + nx * ((ey + ky) + ny * (ez + kz));
                            let mut acc = 0.0;
                            for (qz, &wz) in az.wts[ez].iter().enumerate() {
                                x[2] = az.pts[ez][qz];
                                let bz = az.vals[ez][kz][qz];
                                for (qy, &wy) in ay.wts[ey].iter().enumerate() {
                                    x[1] = ay.pts[ey][qy];
                                    let byz = ay.vals[ey][ky][qy] * bz;
                                    for (qx, &wx) in ax.wts[ex].iter().enumerate() {
                                        x[0] = ax.pts[ex][qx];
                                        let b = ax.vals[ex][kx][qx] * byz;
                                        acc += wx * wy * wz * f.value(&x[..dim]) * b;
                                    }
                                }
                            }
                            l[irow] += acc;
                            work.quad_points += per_fn;
                            work.basis_evals += per_fn * dim as u64;
                        }
                    }
                }
            }
        }
    }
    Ok((out, work))
}

pub fn rhs_galerkin(f: &dyn ScalarField, specs: &[&BasisSpec], rules: &[&QuadRule]) -> Result<RhsTensor> {
    rhs_galerkin_counted(f, specs, rules).map(|r| r.0)
}

/// Quadrature cells of the test intervals on one axis.
struct PwcAxis {
    n_tests: usize,
    // (test index, points, weights)
    cells: Vec<(usize, Vec<f64>, Vec<f64>)>,
}

impl PwcAxis {
    fn new(trial: &BasisSpec, tests: &PwcTestSet, rule: &QuadRule) -> Result<Self> {
        let mut cells = Vec::new();
        for (i, cs) in tests.cells(trial)?.into_iter().enumerate() {
            for c in cs {
                let (x, w) = rule.map_to_interval(c.lo, c.hi)?;
                cells.push((i, x, w));
            }
        }
        Ok(Self { n_tests: tests.len(), cells })
    }

    fn unit() -> Self {
        Self { n_tests: 1, cells: vec![(0, vec![0.0], vec![1.0])] }
    }
}

/// `∫_{I_i × I_j × I_k} f`; no test functions are evaluated.
pub fn rhs_pwc_counted(
    f: &dyn ScalarField,
    trials: &[&BasisSpec],
    tests: &[&PwcTestSet],
    rules: &[&QuadRule],
) -> Result<(RhsTensor, WorkCounters)> {
    let dim = trials.len();
    check_dims(dim, rules.len())?;
    if tests.len() != dim {
        return Err(Error::DimensionMismatch(format!("{} test sets for {dim} axes", tests.len())));
    }
    let mut axes = Vec::with_capacity(3);
    for d in 0..dim {
        axes.push(PwcAxis::new(trials[d], tests[d], rules[d])?);
    }
    while axes.len() < 3 {
        axes.push(PwcAxis::unit());
    }
    let (ax, ay, az) = (&axes[0], &axes[1], &axes[2]);
    let (nx, ny) = (ax.n_tests, ay.n_tests);
    let dims: Vec<usize> = axes[..dim].iter().map(|a| a.n_tests).collect();
    let mut out = RhsTensor::zeros(&dims);
    let l = out.values_mut();
    let mut work = WorkCounters::default();
    let mut x = [0.0; 3];
    for (k, pz, wz) in &az.cells {
        for (j, py, wy) in &ay.cells {
            for (i, px, wx) in &ax.cells {
                let irow = i + nx * (j + ny * k);
                let mut acc = 0.0;
                for (&zq, &wzq) in pz.iter().zip(wz) {
                    x[2] = zq;
                    for (&yq, &wyq) in py.iter().zip(wy) {
                        x[1] = yq;
                        for (&xq, &wxq) in px.iter().zip(wx) {
                            x[0] = xq;
                            acc += wxq * wyq * wzq * f.value(&x[..dim]);
                        }
                    }
                }
                l[irow] += acc;
                work.quad_points += (px.len() * py.len() * pz.len()) as u64;
            }
        }
    }
    Ok((out, work))
}

pub fn rhs_pwc(
    f: &dyn ScalarField,
    trials: &[&BasisSpec],
    tests: &[&PwcTestSet],
    rules: &[&QuadRule],
) -> Result<RhsTensor> {
    rhs_pwc_counted(f, trials, tests, rules).map(|r| r.0)
}
