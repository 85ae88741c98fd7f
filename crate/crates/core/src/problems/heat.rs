use crate::assembly::{
    boundary_rows, mass_1d_galerkin, pwc_1d, rhs_galerkin, rhs_pwc, stiffness_1d_galerkin, BcKind,
    ScalarField, SparseMatrix,
};
use crate::error::{invalid, Result};
use crate::quadrature::QuadRule;
use crate::solver::{adi_solve, BandedLU};
use crate::tensor::CoefficientTensor;
use crate::testspace::PwcTestSet;

use super::{apply_kron_2d, l2_project, Method, ProblemConfig};

/// How the mass system of each step is factorized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorPath {
    /// One banded LU per axis, swept alternately.
    Kronecker,
    /// A single banded LU of the assembled 2D matrix.
    Assembled,
}

enum MassFactor {
    Kronecker(Vec<BandedLU>),
    Assembled(BandedLU),
}

fn kron_sparse(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    let (ma, na) = (a.n_rows(), a.n_cols());
    let mut t = Vec::with_capacity(a.nnz() * b.nnz());
    for (j, l, vb) in b.triplets() {
        for (i, k, va) in a.triplets() {
            t.push((i + ma * j, k + na * l, va * vb));
        }
    }
    SparseMatrix::from_triplets(ma * b.n_rows(), na * b.n_cols(), t)
}

/// Explicit Euler for `u_t = Δu + f` on a 2D box, homogeneous Dirichlet on
/// the configured `D` sides. The mass system is factorized once.
pub struct HeatStepper {
    cfg: ProblemConfig,
    mass: [SparseMatrix; 2],
    op: [SparseMatrix; 2],
    boundary: Vec<usize>,
    factor: MassFactor,
    tests: Vec<PwcTestSet>,
}

impl HeatStepper {
    pub fn new(cfg: &ProblemConfig, path: FactorPath) -> Result<Self> {
        if cfg.dim() != 2 {
            return Err(invalid("the heat driver is two-dimensional"));
        }
        if cfg.method == Method::Pwc && cfg.specs.iter().any(|s| s.degree() < 2) {
            return Err(invalid("piece-wise constant tests need degree >= 2 for the Laplacian"));
        }
        let tests = cfg.test_sets();
        let mut mass = Vec::new();
        let mut op = Vec::new();
        for (d, s) in cfg.specs.iter().enumerate() {
            let rule = cfg.matrix_rule(d);
            match cfg.method {
                Method::Galerkin => {
                    mass.push(SparseMatrix::from_dense(&mass_1d_galerkin(s, &rule)?.to_dense()));
                    let k = stiffness_1d_galerkin(s, &rule)?.to_dense();
                    let neg = SparseMatrix::from_dense(&k);
                    let t = neg.triplets().map(|(i, j, v)| (i, j, -v)).collect();
                    op.push(SparseMatrix::from_triplets(neg.n_rows(), neg.n_cols(), t)?);
                }
                Method::Pwc => {
                    mass.push(pwc_1d(s, &tests[d], &rule, 0)?);
                    op.push(pwc_1d(s, &tests[d], &rule, 2)?);
                }
            }
        }
        let (nx, ny) = (cfg.specs[0].num_basis(), cfg.specs[1].num_basis());
        let dir = cfg.bc.sides(BcKind::Dirichlet);
        let boundary = boundary_rows(nx, ny, &dir);
        let factor = match path {
            FactorPath::Kronecker => {
                let mut lus = Vec::new();
                for (d, m) in mass.iter().enumerate() {
                    let mut b = m.to_banded()?;
                    let n = b.n();
                    for side in &dir {
                        if side.axis() == d {
                            b.set_unit_row(if side.is_upper() { n - 1 } else { 0 });
                        }
                    }
                    lus.push(BandedLU::factor(&b)?);
                }
                MassFactor::Kronecker(lus)
            }
            FactorPath::Assembled => {
                let mut m = kron_sparse(&mass[0], &mass[1])?;
                m.set_unit_rows(&boundary)?;
                MassFactor::Assembled(BandedLU::factor(&m.to_banded()?)?)
            }
        };
        let [m0, m1]: [SparseMatrix; 2] = mass.try_into().expect("two axes");
        let [o0, o1]: [SparseMatrix; 2] = op.try_into().expect("two axes");
        Ok(Self { cfg: cfg.clone(), mass: [m0, m1], op: [o0, o1], boundary, factor, tests })
    }

    pub fn config(&self) -> &ProblemConfig {
        &self.cfg
    }

    /// Unknowns held at zero.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// Projection of `u0` with the constrained coefficients zeroed.
    pub fn initial(&self, u0: &dyn ScalarField) -> Result<CoefficientTensor> {
        let mut u = l2_project(&self.cfg, u0)?;
        for &r in &self.boundary {
            u.values_mut()[r] = 0.0;
        }
        Ok(u)
    }

    /// One step `(v, u') = (v, u + dt Δu + dt f)`.
    pub fn explicit_step(&self, u: &CoefficientTensor, f: Option<&dyn ScalarField>) -> Result<CoefficientTensor> {
        let dt = self.cfg.dt;
        let uv = u.values();
        let mut rhs = apply_kron_2d(&self.mass[0], &self.mass[1], uv);
        if dt != 0.0 {
            let ax = apply_kron_2d(&self.op[0], &self.mass[1], uv);
            let ay = apply_kron_2d(&self.mass[0], &self.op[1], uv);
            for ((r, a), b) in rhs.iter_mut().zip(ax).zip(ay) {
                *r += dt * (a + b);
            }
            if let Some(f) = f {
                let rules = (0..2).map(|d| self.cfg.rhs_rule(d, f.poly_degree())).collect::<Result<Vec<QuadRule>>>()?;
                let rr: Vec<&QuadRule> = rules.iter().collect();
                let specs = self.cfg.spec_refs();
                let load = match self.cfg.method {
                    Method::Galerkin => rhs_galerkin(f, &specs, &rr)?,
                    Method::Pwc => rhs_pwc(f, &specs, &[&self.tests[0], &self.tests[1]], &rr)?,
                };
                for (r, l) in rhs.iter_mut().zip(load.values()) {
                    *r += dt * l;
                }
            }
        }
        for &r in &self.boundary {
            rhs[r] = 0.0;
        }
        let t = CoefficientTensor::from_vec(u.dims(), rhs)?;
        match &self.factor {
            MassFactor::Kronecker(lus) => adi_solve(&[&lus[0], &lus[1]], &t),
            MassFactor::Assembled(lu) => {
                let mut v = t.into_values();
                lu.solve(&mut v)?;
                CoefficientTensor::from_vec(u.dims(), v)
            }
        }
    }
}
