//! Timed generation and factorization runs with exact work counters.

use std::fmt::Write as _;
use std::time::Instant;

use crate::assembly::{
    laplace_2d_strong, laplace_2d_weak, laplace_rhs, mass_1d_galerkin, mass_1d_pwc, rhs_galerkin_counted,
    rhs_pwc_counted, PolyProduct, Side, Tests, WorkCounters,
};
use crate::error::Result;
use crate::problems::{Method, ProblemConfig};
use crate::quadrature::{gauss_legendre, points_for_degree, QuadRule};
use crate::solver::{adi_solve, dense_solve, BandedLU};
use crate::testspace::PwcTestSet;

pub const CSV_HEADER: &str = "case,nx,ny,nz,p,method,nrdof,gen_seconds,factor_seconds,quad_points,basis_evals";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub case: String,
    pub elems: Vec<usize>,
    pub p: usize,
    pub method: Method,
    pub nrdof: u64,
    pub gen_seconds: f64,
    pub factor_seconds: f64,
    pub work: WorkCounters,
    /// Reason the configuration was not run.
    pub failure: Option<String>,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let axis = |d: usize| self.elems.get(d).map_or(String::new(), usize::to_string);
        let case = if self.failure.is_some() { format!("{}-failed", self.case) } else { self.case.clone() };
        format!(
            "{case},{},{},{},{},{},{},{:.6},{:.6},{},{}",
            axis(0),
            axis(1),
            axis(2),
            self.p,
            self.method,
            self.nrdof,
            self.gen_seconds,
            self.factor_seconds,
            self.work.quad_points,
            self.work.basis_evals
        )
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}

/// `Π (n_axis + p)`, computed without touching any mesh.
pub fn nrdof(elems: &[usize], p: usize) -> u64 {
    elems.iter().map(|&n| (n + p) as u64).product()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

/// Default memory budget for a single benchmark configuration.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub repeats: usize,
    pub memory_budget: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { repeats: 3, memory_budget: DEFAULT_MEMORY_BUDGET }
    }
}

/// Galerkin or PWC right-hand side of the tri-cubic load, with the reduced
/// rule for each method, and its work counters.
pub fn projection_rhs(cfg: &ProblemConfig) -> Result<(crate::tensor::RhsTensor, WorkCounters)> {
    let f = PolyProduct::tri_cubic(cfg.dim());
    let specs = cfg.spec_refs();
    let rules = (0..cfg.dim()).map(|d| cfg.rhs_rule(d, Some(3))).collect::<Result<Vec<QuadRule>>>()?;
    let rr: Vec<&QuadRule> = rules.iter().collect();
    match cfg.method {
        Method::Galerkin => rhs_galerkin_counted(&f, &specs, &rr),
        Method::Pwc => {
            let tests = cfg.test_sets();
            let tr: Vec<&PwcTestSet> = tests.iter().collect();
            rhs_pwc_counted(&f, &specs, &tr, &rr)
        }
    }
}

fn failed(case: &str, elems: Vec<usize>, p: usize, method: Method, why: String) -> BenchRecord {
    BenchRecord {
        case: case.into(),
        nrdof: nrdof(&elems, p),
        elems,
        p,
        method,
        gen_seconds: f64::NAN,
        factor_seconds: f64::NAN,
        work: WorkCounters::default(),
        failure: Some(why),
    }
}

/// 3D projection with the tri-cubic load: generation is RHS plus 1D matrix
/// assembly, factorization covers the per-axis LU and the sweeps.
pub fn bench_projection(sizes: &[usize], degrees: &[usize], methods: &[Method], opts: &BenchOptions) -> Vec<BenchRecord> {
    let mut out = Vec::new();
    for &n in sizes {
        for &p in degrees {
            for &method in methods {
                let elems = vec![n; 3];
                // rhs, solution and one rotated copy
                let bytes = 3 * 8 * nrdof(&elems, p);
                if bytes > opts.memory_budget {
                    out.push(failed("projection", elems, p, method, format!("needs ~{bytes} bytes")));
                    continue;
                }
                match run_projection(&elems, p, method, opts.repeats.max(1)) {
                    Ok(r) => out.push(r),
                    Err(e) => out.push(failed("projection", elems, p, method, e.to_string())),
                }
            }
        }
    }
    out
}

fn run_projection(elems: &[usize], p: usize, method: Method, repeats: usize) -> Result<BenchRecord> {
    let cfg = ProblemConfig::uniform(elems, p, method)?;
    let (mut gen, mut fac) = (Vec::new(), Vec::new());
    let mut work = WorkCounters::default();
    for _ in 0..repeats {
        let t = Instant::now();
        let (rhs, w) = projection_rhs(&cfg)?;
        let mats = match method {
            Method::Galerkin => cfg
                .specs
                .iter()
                .enumerate()
                .map(|(d, s)| mass_1d_galerkin(s, &cfg.matrix_rule(d)))
                .collect::<Result<Vec<_>>>()?,
            Method::Pwc => {
                let tests = cfg.test_sets();
                cfg.specs
                    .iter()
                    .zip(&tests)
                    .enumerate()
                    .map(|(d, (s, ts))| mass_1d_pwc(s, ts, &cfg.matrix_rule(d)))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        gen.push(t.elapsed().as_secs_f64());
        let t = Instant::now();
        let lus = mats.iter().map(BandedLU::factor).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&BandedLU> = lus.iter().collect();
        let u = adi_solve(&refs, &rhs)?;
        fac.push(t.elapsed().as_secs_f64());
        std::hint::black_box(u);
        work = w;
    }
    Ok(BenchRecord {
        case: "projection".into(),
        elems: elems.to_vec(),
        p,
        method,
        nrdof: nrdof(elems, p),
        gen_seconds: median(gen),
        factor_seconds: median(fac),
        work,
        failure: None,
    })
}

/// 2D Laplace with homogeneous Dirichlet data and unit load.
pub fn bench_laplace(sizes: &[usize], degrees: &[usize], methods: &[Method], opts: &BenchOptions) -> Vec<BenchRecord> {
    let mut out = Vec::new();
    for &n in sizes {
        for &p in degrees {
            for &method in methods {
                let elems = vec![n; 2];
                let nd = nrdof(&elems, p);
                let band = (2 * p + 1) as u64 * (n + p) as u64;
                let bytes = 8 * nd * (3 * band + 1);
                if bytes > opts.memory_budget {
                    out.push(failed("laplace", elems, p, method, format!("needs ~{bytes} bytes")));
                    continue;
                }
                match run_laplace(&elems, p, method, opts.repeats.max(1)) {
                    Ok(r) => out.push(r),
                    Err(e) => out.push(failed("laplace", elems, p, method, e.to_string())),
                }
            }
        }
    }
    out
}

fn run_laplace(elems: &[usize], p: usize, method: Method, repeats: usize) -> Result<BenchRecord> {
    let cfg = ProblemConfig::uniform(elems, p, method)?;
    let specs = [&cfg.specs[0], &cfg.specs[1]];
    let n_g = points_for_degree(2 * p);
    let rule = gauss_legendre(n_g)?;
    let one = |_: &[f64]| 1.0;
    let (tx, ty) = match method {
        Method::Galerkin => (Tests::BSpline, Tests::BSpline),
        Method::Pwc => {
            let t = cfg.test_sets();
            (Tests::Pwc(t[0].clone()), Tests::Pwc(t[1].clone()))
        }
    };
    let (mut gen, mut fac) = (Vec::new(), Vec::new());
    for _ in 0..repeats {
        let t = Instant::now();
        let mut a = match method {
            Method::Galerkin => laplace_2d_weak(specs, &rule)?,
            Method::Pwc => laplace_2d_strong(specs, [&tx, &ty], &rule, &[])?,
        };
        let mut b = laplace_rhs(specs, [&tx, &ty], &rule, &one, &[], &one)?;
        gen.push(t.elapsed().as_secs_f64());
        let t = Instant::now();
        let rows = crate::assembly::boundary_rows(specs[0].num_basis(), specs[1].num_basis(), &Side::ALL);
        crate::assembly::apply_dirichlet(&mut a, &mut b, &rows)?;
        std::hint::black_box(dense_solve(&a, &b)?);
        fac.push(t.elapsed().as_secs_f64());
    }
    // distinct volume points, and one value per local test function per axis
    let cells: u64 = match method {
        Method::Galerkin => elems.iter().map(|&n| n as u64).product(),
        Method::Pwc => cfg
            .test_sets()
            .iter()
            .zip(&cfg.specs)
            .map(|(t, s)| t.cells(s).map(|c| c.iter().map(Vec::len).sum::<usize>() as u64))
            .product::<Result<u64>>()?,
    };
    let quad_points = cells * (n_g * n_g) as u64;
    let basis_evals = if method == Method::Galerkin { quad_points * 2 * (p + 1) as u64 } else { 0 };
    Ok(BenchRecord {
        case: "laplace".into(),
        elems: elems.to_vec(),
        p,
        method,
        nrdof: nrdof(elems, p),
        gen_seconds: median(gen),
        factor_seconds: median(fac),
        work: WorkCounters { quad_points, basis_evals },
        failure: None,
    })
}
