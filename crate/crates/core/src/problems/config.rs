use std::fmt;
use std::str::FromStr;

use crate::assembly::BoundaryConditions;
use crate::bspline::{make_uniform_clamped, BasisSpec};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_legendre, points_for_degree, QuadRule, MAX_POINTS};
use crate::testspace::{PwcTestSet, TestFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Galerkin,
    Pwc,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "galerkin" => Ok(Method::Galerkin),
            "pwc" => Ok(Method::Pwc),
            _ => Err(invalid(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Galerkin => "galerkin",
            Method::Pwc => "pwc",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub specs: Vec<BasisSpec>,
    pub method: Method,
    /// Interval family for `Method::Pwc`.
    pub family: TestFamily,
    /// Gauss points per cell for right-hand sides; chosen from the field's
    /// degree when unset.
    pub rhs_points: Option<usize>,
    pub bc: BoundaryConditions,
    pub dt: f64,
    pub steps: usize,
}

impl ProblemConfig {
    /// Uniform meshes on the unit box, one entry of `elems` per axis.
    pub fn uniform(elems: &[usize], p: usize, method: Method) -> Result<Self> {
        if !(1..=3).contains(&elems.len()) {
            return Err(invalid(format!("{} axes; 1 to 3 supported", elems.len())));
        }
        let specs = elems
            .iter()
            .map(|&n| make_uniform_clamped(0.0, 1.0, n, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            specs,
            method,
            family: TestFamily::default(),
            rhs_points: None,
            bc: BoundaryConditions::all_dirichlet(),
            dt: 0.0,
            steps: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.specs.len()
    }

    pub fn spec_refs(&self) -> Vec<&BasisSpec> {
        self.specs.iter().collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.specs.iter().map(BasisSpec::num_basis).collect()
    }

    pub fn test_sets(&self) -> Vec<PwcTestSet> {
        self.specs.iter().map(|s| self.family.build(s)).collect()
    }

    /// Rule exact for products of two trial functions on `axis`.
    pub fn matrix_rule(&self, axis: usize) -> QuadRule {
        gauss_legendre(points_for_degree(2 * self.specs[axis].degree()).min(MAX_POINTS))
            .expect("point count in range")
    }

    /// Rule for a load of the given per-axis degree on `axis`.
    pub fn rhs_rule(&self, axis: usize, f_degree: Option<usize>) -> Result<QuadRule> {
        let p = self.specs[axis].degree();
        let n = match (self.rhs_points, f_degree, self.method) {
            (Some(n), _, _) => n,
            (None, Some(d), Method::Galerkin) => points_for_degree(d + p),
            (None, Some(d), Method::Pwc) => points_for_degree(d),
            (None, None, _) => points_for_degree(2 * p) + 1,
        };
        gauss_legendre(n.min(MAX_POINTS))
    }

    /// Heuristic explicit step bound `h^2 / (2 dim p^2)`.
    pub fn stability_limit(&self) -> f64 {
        let h = self
            .specs
            .iter()
            .flat_map(|s| s.breaks().windows(2).map(|w| w[1] - w[0]))
            .fold(f64::INFINITY, f64::min);
        let p = self.specs.iter().map(BasisSpec::degree).max().unwrap_or(1).max(1) as f64;
        h * h / (2.0 * self.dim() as f64 * p * p)
    }
}
