use crate::assembly::{mass_1d_galerkin, mass_1d_pwc, rhs_galerkin, rhs_pwc, ScalarField};
use crate::error::Result;
use crate::quadrature::QuadRule;
use crate::solver::{adi_solve, BandedLU};
use crate::tensor::CoefficientTensor;
use crate::testspace::PwcTestSet;

use super::{Method, ProblemConfig};

/// Per-axis factorized mass matrices for the configured method.
pub fn mass_factors(cfg: &ProblemConfig) -> Result<Vec<BandedLU>> {
    match cfg.method {
        Method::Galerkin => cfg
            .specs
            .iter()
            .enumerate()
            .map(|(d, s)| BandedLU::factor(&mass_1d_galerkin(s, &cfg.matrix_rule(d))?))
            .collect(),
        Method::Pwc => pwc_mass_factors(cfg, &cfg.test_sets()),
    }
}

pub fn pwc_mass_factors(cfg: &ProblemConfig, tests: &[PwcTestSet]) -> Result<Vec<BandedLU>> {
    cfg.specs
        .iter()
        .zip(tests)
        .enumerate()
        .map(|(d, (s, t))| BandedLU::factor(&mass_1d_pwc(s, t, &cfg.matrix_rule(d))?))
        .collect()
}

/// Trial coefficients of the projection of `f`.
pub fn l2_project(cfg: &ProblemConfig, f: &dyn ScalarField) -> Result<CoefficientTensor> {
    let specs = cfg.spec_refs();
    let rules = (0..cfg.dim())
        .map(|d| cfg.rhs_rule(d, f.poly_degree()))
        .collect::<Result<Vec<QuadRule>>>()?;
    let rule_refs: Vec<&QuadRule> = rules.iter().collect();
    let (factors, rhs) = match cfg.method {
        Method::Galerkin => (mass_factors(cfg)?, rhs_galerkin(f, &specs, &rule_refs)?),
        Method::Pwc => {
            let tests = cfg.test_sets();
            let test_refs: Vec<&PwcTestSet> = tests.iter().collect();
            (pwc_mass_factors(cfg, &tests)?, rhs_pwc(f, &specs, &test_refs, &rule_refs)?)
        }
    };
    let refs: Vec<&BandedLU> = factors.iter().collect();
    adi_solve(&refs, &rhs)
}
