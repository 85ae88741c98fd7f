use std::fmt;
use std::str::FromStr;

use crate::bspline::BasisSpec;
use crate::error::{invalid, Error, Result};
use crate::quadrature::QuadRule;
use crate::testspace::PwcTestSet;

use super::matrix::{DenseMatrix, SparseMatrix};
use super::{require_exact, ScalarField};

/// Test functions along one axis.
#[derive(Debug, Clone, PartialEq)]
pub enum Tests {
    /// The trial B-splines themselves.
    BSpline,
    /// Indicators of the given intervals.
    Pwc(PwcTestSet),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn axis(self) -> usize {
        match self {
            Side::Left | Side::Right => 0,
            Side::Bottom | Side::Top => 1,
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(self, Side::Right | Side::Top)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Boundary condition per side, written as four letters `D`/`N` in the
/// order left, right, bottom, top (e.g. `DDNN`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryConditions([BcKind; 4]);

impl BoundaryConditions {
    pub fn all_dirichlet() -> Self {
        Self([BcKind::Dirichlet; 4])
    }

    pub fn kind(&self, side: Side) -> BcKind {
        self.0[side as usize]
    }

    pub fn sides(&self, kind: BcKind) -> Vec<Side> {
        Side::ALL.into_iter().filter(|&s| self.kind(s) == kind).collect()
    }
}

impl FromStr for BoundaryConditions {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kinds: Vec<BcKind> = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'D' => Ok(BcKind::Dirichlet),
                'N' => Ok(BcKind::Neumann),
                _ => Err(invalid(format!("boundary code {c:?} is neither D nor N"))),
            })
            .collect::<Result<_>>()?;
        let arr: [BcKind; 4] = kinds
            .try_into()
            .map_err(|_| invalid(format!("boundary string {s:?} needs four letters")))?;
        Ok(Self(arr))
    }
}

impl fmt::Display for BoundaryConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in self.0 {
            f.write_str(if k == BcKind::Dirichlet { "D" } else { "N" })?;
        }
        Ok(())
    }
}

/// Unknowns `i + nx * j` on the given sides, sorted.
pub fn boundary_rows(nx: usize, ny: usize, sides: &[Side]) -> Vec<usize> {
    let mut rows = Vec::new();
    for &s in sides {
        match s {
            Side::Left => rows.extend((0..ny).map(|j| nx * j)),
            Side::Right => rows.extend((0..ny).map(|j| nx - 1 + nx * j)),
            Side::Bottom => rows.extend(0..nx),
            Side::Top => rows.extend((0..nx).map(|i| i + nx * (ny - 1))),
        }
    }
    rows.sort_unstable();
    rows.dedup();
    rows
}

struct QCell {
    element: usize,
    x: Vec<f64>,
    w: Vec<f64>,
    // trial[q][order][local]
    trial: Vec<Vec<Vec<f64>>>,
    // (test index, per point value and slope)
    tests: Vec<(usize, Vec<[f64; 2]>)>,
}

struct Axis<'a> {
    spec: &'a BasisSpec,
    tests: &'a Tests,
    n_tests: usize,
    cells: Vec<QCell>,
}

impl<'a> Axis<'a> {
    fn new(spec: &'a BasisSpec, tests: &'a Tests, rule: &QuadRule, nders: usize) -> Result<Self> {
        let p = spec.degree();
        let mut cells = Vec::new();
        let push = |e: usize, lo: f64, hi: f64| -> Result<QCell> {
            let (x, w) = rule.map_to_interval(lo, hi)?;
            let trial = x.iter().map(|&xq| spec.ders_in_element(e, xq, nders)).collect();
            Ok(QCell { element: e, x, w, trial, tests: Vec::new() })
        };
        let n_tests = match tests {
            Tests::BSpline => {
                for e in 0..spec.num_elements() {
                    let (lo, hi) = spec.element_bounds(e);
                    let mut c = push(e, lo, hi)?;
                    c.tests = (0..=p)
                        .map(|j| {
                            let v = c.trial.iter().map(|d| [d[0][j], if nders > 0 { d[1][j] } else { 0.0 }]);
                            (e + j, v.collect())
                        })
                        .collect();
                    cells.push(c);
                }
                spec.num_basis()
            }
            Tests::Pwc(set) => {
                for (i, cs) in set.cells(spec)?.into_iter().enumerate() {
                    for cell in cs {
                        let mut c = push(cell.element, cell.lo, cell.hi)?;
                        c.tests = vec![(i, vec![[1.0, 0.0]; c.x.len()])];
                        cells.push(c);
                    }
                }
                set.len()
            }
        };
        Ok(Self { spec, tests, n_tests, cells })
    }

    /// `∫ T_i B_j` along this axis.
    fn mass(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n_tests, self.spec.num_basis());
        for c in &self.cells {
            for (ti, tv) in &c.tests {
                for (q, &w) in c.w.iter().enumerate() {
                    for (k, b) in c.trial[q][0].iter().enumerate() {
                        m.add(*ti, c.element + k, w * tv[q][0] * b);
                    }
                }
            }
        }
        m
    }

    /// Test values and trial slopes at one end of the axis.
    fn trace(&self, upper: bool) -> Result<(Vec<(usize, f64)>, usize, Vec<f64>)> {
        let (a, b) = self.spec.domain();
        let x = if upper { b } else { a };
        let tol = 1e-10 * (b - a);
        let tests = match self.tests {
            Tests::BSpline => {
                let (first, vals) = self.spec.eval_nonzero(x)?;
                vals.into_iter().enumerate().filter(|(_, v)| *v != 0.0).map(|(j, v)| (first + j, v)).collect()
            }
            Tests::Pwc(set) => set
                .intervals()
                .iter()
                .enumerate()
                .filter(|(_, (lo, hi))| if upper { (hi - b).abs() <= tol } else { (lo - a).abs() <= tol })
                .map(|(i, _)| (i, 1.0))
                .collect(),
        };
        let (first, mut d) = self.spec.eval_ders(x, 1)?;
        Ok((tests, first, d.swap_remove(1)))
    }
}

fn check_pair(specs: [&BasisSpec; 2], min_degree: usize) -> Result<()> {
    for s in specs {
        if s.degree() < min_degree {
            return Err(invalid(format!("degree {} below the required {min_degree}", s.degree())));
        }
    }
    Ok(())
}

/// Sums `integrand(test_x, test_y, trial_x, trial_y)` over all cell pairs.
fn volume(
    ax: &Axis,
    ay: &Axis,
    integrand: impl Fn([f64; 2], [f64; 2], [f64; 3], [f64; 3]) -> f64,
) -> Vec<(usize, usize, f64)> {
    let (ntx, nx) = (ax.n_tests, ax.spec.num_basis());
    let (px, py) = (ax.spec.degree(), ay.spec.degree());
    let pick = |d: &Vec<Vec<f64>>, k: usize| [d[0][k], d.get(1).map_or(0.0, |r| r[k]), d.get(2).map_or(0.0, |r| r[k])];
    let mut trip = Vec::new();
    for cy in &ay.cells {
        for cx in &ax.cells {
            for (tj, tvy) in &cy.tests {
                for (ti, tvx) in &cx.tests {
                    let row = ti + ntx * tj;
                    for ly in 0..=py {
                        for kx in 0..=px {
                            let mut acc = 0.0;
                            for (qy, &wy) in cy.w.iter().enumerate() {
                                let by = pick(&cy.trial[qy], ly);
                                for (qx, &wx) in cx.w.iter().enumerate() {
                                    let bx = pick(&cx.trial[qx], kx);
                                    acc += wx * wy * integrand(tvx[qx], tvy[qy], bx, by);
                                }
                            }
                            let col = (cx.element + kx) + nx * (cy.element + ly);
                            trip.push((row, col, acc));
                        }
                    }
                }
            }
        }
    }
    trip
}

/// `K = ∫ ∇v · ∇u` with B-spline tests.
pub fn laplace_2d_weak(specs: [&BasisSpec; 2], rule: &QuadRule) -> Result<SparseMatrix> {
    check_pair(specs, 1)?;
    for s in specs {
        require_exact(rule, 2 * s.degree())?;
    }
    let t = Tests::BSpline;
    let ax = Axis::new(specs[0], &t, rule, 1)?;
    let ay = Axis::new(specs[1], &t, rule, 1)?;
    let trip = volume(&ax, &ay, |tx, ty, bx, by| tx[1] * ty[0] * bx[1] * by[0] + tx[0] * ty[1] * bx[0] * by[1]);
    let n = specs[0].num_basis() * specs[1].num_basis();
    SparseMatrix::from_triplets(n, n, trip)
}

/// `A = -∫ v Δu + Σ_{sides in flux} ∫_side v ∂u/∂n`.
pub fn laplace_2d_strong(
    specs: [&BasisSpec; 2],
    tests: [&Tests; 2],
    rule: &QuadRule,
    flux: &[Side],
) -> Result<SparseMatrix> {
    check_pair(specs, 2)?;
    for s in specs {
        require_exact(rule, 2 * s.degree())?;
    }
    let ax = Axis::new(specs[0], tests[0], rule, 2)?;
    let ay = Axis::new(specs[1], tests[1], rule, 2)?;
    let mut trip = volume(&ax, &ay, |tx, ty, bx, by| -tx[0] * ty[0] * (bx[2] * by[0] + bx[0] * by[2]));
    let nx = specs[0].num_basis();
    let ntx = ax.n_tests;
    for &side in flux {
        let sign = if side.is_upper() { 1.0 } else { -1.0 };
        if side.axis() == 0 {
            let (tv, first, slope) = ax.trace(side.is_upper())?;
            let my = ay.mass();
            for &(ti, t) in &tv {
                for (k, &d) in slope.iter().enumerate() {
                    for tj in 0..my.rows() {
                        for l in 0..my.cols() {
                            let m = my.get(tj, l);
                            if m != 0.0 {
                                trip.push((ti + ntx * tj, first + k + nx * l, sign * t * d * m));
                            }
                        }
                    }
                }
            }
        } else {
            let (tv, first, slope) = ay.trace(side.is_upper())?;
            let mx = ax.mass();
            for &(tj, t) in &tv {
                for (l, &d) in slope.iter().enumerate() {
                    for ti in 0..mx.rows() {
                        for k in 0..mx.cols() {
                            let m = mx.get(ti, k);
                            if m != 0.0 {
                                trip.push((ti + ntx * tj, k + nx * (first + l), sign * t * d * m));
                            }
                        }
                    }
                }
            }
        }
    }
    SparseMatrix::from_triplets(ntx * ay.n_tests, nx * specs[1].num_basis(), trip)
}

/// `l(v) = ∫ v f + Σ_{sides in neumann} ∫_side v g`.
pub fn laplace_rhs(
    specs: [&BasisSpec; 2],
    tests: [&Tests; 2],
    rule: &QuadRule,
    f: &dyn ScalarField,
    neumann: &[Side],
    g: &dyn ScalarField,
) -> Result<Vec<f64>> {
    let ax = Axis::new(specs[0], tests[0], rule, 0)?;
    let ay = Axis::new(specs[1], tests[1], rule, 0)?;
    let ntx = ax.n_tests;
    let mut out = vec![0.0; ntx * ay.n_tests];
    for cy in &ay.cells {
        for cx in &ax.cells {
            for (tj, tvy) in &cy.tests {
                for (ti, tvx) in &cx.tests {
                    let mut acc = 0.0;
                    for (qy, &wy) in cy.w.iter().enumerate() {
                        for (qx, &wx) in cx.w.iter().enumerate() {
                            acc += wx * wy * tvx[qx][0] * tvy[qy][0] * f.value(&[cx.x[qx], cy.x[qy]]);
                        }
                    }
                    out[ti + ntx * tj] += acc;
                }
            }
        }
    }
    for &side in neumann {
        let (this, other) = if side.axis() == 0 { (&ax, &ay) } else { (&ay, &ax) };
        let (tv, _, _) = this.trace(side.is_upper())?;
        let (a, b) = this.spec.domain();
        let edge = if side.is_upper() { b } else { a };
        for c in &other.cells {
            for (to, ov) in &c.tests {
                for (q, &w) in c.w.iter().enumerate() {
                    let pt = if side.axis() == 0 { [edge, c.x[q]] } else { [c.x[q], edge] };
                    let gv = w * ov[q][0] * g.value(&pt);
                    for &(tt, t) in &tv {
                        let row = if side.axis() == 0 { tt + ntx * to } else { to + ntx * tt };
                        out[row] += t * gv;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bspline::make_uniform_clamped;
    use crate::quadrature::gauss_legendre;

    #[test]
    fn bc_string() {
        let bc: BoundaryConditions = "DDNN".parse().unwrap();
        assert_eq!(bc.kind(Side::Right), BcKind::Dirichlet);
        assert_eq!(bc.sides(BcKind::Neumann), vec![Side::Bottom, Side::Top]);
        assert_eq!(bc.to_string(), "DDNN");
        assert!("DDN".parse::<BoundaryConditions>().is_err());
        assert!("DDNX".parse::<BoundaryConditions>().is_err());
    }

    #[test]
    fn boundary_row_sets() {
        assert_eq!(boundary_rows(3, 3, &[Side::Left]), vec![0, 3, 6]);
        assert_eq!(boundary_rows(3, 2, &Side::ALL), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(boundary_rows(3, 3, &Side::ALL).len(), 8);
    }

    #[test]
    fn hat_stiffness_2x2() {
        // bilinear elements, h = 1/2: the element matrix is the classic
        // [4 -1 -2 -1]/6 pattern, independent of h
        let s = make_uniform_clamped(0.0, 1.0, 2, 1).unwrap();
        let k = laplace_2d_weak([&s, &s], &gauss_legendre(2).unwrap()).unwrap();
        let ke = [[4.0, -1.0, -2.0, -1.0], [-1.0, 4.0, -1.0, -2.0], [-2.0, -1.0, 4.0, -1.0], [-1.0, -2.0, -1.0, 4.0]];
        let mut want = DenseMatrix::zeros(9, 9);
        for ey in 0..2 {
            for ex in 0..2 {
                // counter-clockwise local nodes
                let nodes = [ex + 3 * ey, ex + 1 + 3 * ey, ex + 1 + 3 * (ey + 1), ex + 3 * (ey + 1)];
                for a in 0..4 {
                    for b in 0..4 {
                        want.add(nodes[a], nodes[b], ke[a][b] / 6.0);
                    }
                }
            }
        }
        assert!(k.to_dense().max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn strong_with_full_flux_equals_weak() {
        let s = make_uniform_clamped(0.0, 1.0, 4, 2).unwrap();
        let t = make_uniform_clamped(0.0, 2.0, 3, 3).unwrap();
        let g = gauss_legendre(4).unwrap();
        let w = laplace_2d_weak([&s, &t], &g).unwrap();
        let b = Tests::BSpline;
        let a = laplace_2d_strong([&s, &t], [&b, &b], &g, &Side::ALL).unwrap();
        assert!(a.to_dense().max_abs_diff(&w.to_dense()) < 1e-12 * w.max_abs());
    }

    #[test]
    fn strong_rejects_linear() {
        let s = make_uniform_clamped(0.0, 1.0, 4, 1).unwrap();
        let b = Tests::BSpline;
        assert!(laplace_2d_strong([&s, &s], [&b, &b], &gauss_legendre(2).unwrap(), &[]).is_err());
    }
}
