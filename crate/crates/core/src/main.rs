use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use iga_pwc::assembly::{BoundaryConditions, Constant, PolyProduct, ScalarField};
use iga_pwc::harness::bench::{self, BenchOptions};
use iga_pwc::harness::{read_ppm, verify_equivalence, write_ppm, PpmImage, Suite};
use iga_pwc::problems::{
    bitmap_project, evaluate, grid_points, l2_error, l2_project, laplace_solve, BoundaryData, FactorPath,
    HeatStepper, Method, ProblemConfig,
};
use iga_pwc::quadrature::gauss_legendre;
use iga_pwc::testspace::TestFamily;
use iga_pwc::{Error, Result};

#[derive(Parser)]
#[command(name = "iga-pwc", version, about = "B-spline projections and solvers with piece-wise constant tests")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Element counts per axis, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    elems: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    degree: usize,
    #[arg(long, default_value = "galerkin")]
    method: Method,
    /// Test interval family for pwc.
    #[arg(long, default_value = "greville")]
    family: TestFamily,
    /// Gauss points per cell for the load; picked from its degree when unset.
    #[arg(long)]
    rhs_points: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<ProblemConfig> {
        let mut cfg = ProblemConfig::uniform(&self.elems, self.degree, self.method)?;
        cfg.family = self.family;
        cfg.rhs_points = self.rhs_points;
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RhsKind {
    Poly3,
    Const,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchCase {
    Projection,
    Laplace,
}

#[derive(Subcommand)]
enum Cmd {
    /// L2 projection of a load onto the trial space.
    Project {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "poly3")]
        rhs: RhsKind,
        /// Polynomial coefficients for `--rhs file`, one axis per line.
        #[arg(long)]
        rhs_file: Option<PathBuf>,
        /// Sample points per axis in the output.
        #[arg(long, default_value_t = 11)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// -Δu = f on the unit square.
    Laplace {
        #[command(flatten)]
        common: Common,
        /// Side kinds in the order left, right, bottom, top, e.g. DDNN.
        #[arg(long, default_value = "DDDD")]
        bc: BoundaryConditions,
        #[arg(long, value_enum, default_value = "const")]
        rhs: RhsKind,
        #[arg(long)]
        rhs_file: Option<PathBuf>,
        #[arg(long, default_value_t = 33)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Explicit Euler heat flow from sin(πx)sin(πy).
    Dynamics {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 10)]
        snapshot_every: usize,
        /// Snapshot width and height in pixels.
        #[arg(long, default_value_t = 128)]
        resolution: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Projects the RGB channels of a PPM image.
    Bitmap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        elems: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value = "galerkin")]
        method: Method,
        #[arg(long, default_value = "greville")]
        family: TestFamily,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        err_csv: Option<PathBuf>,
    },
    /// Timed generation and factorization runs.
    Bench {
        #[arg(long, value_enum)]
        case: BenchCase,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        degrees: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "galerkin,pwc")]
        methods: Vec<Method>,
        /// Largest accepted element count per axis; 64 for projection, 256 for laplace.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Equivalence checks; exits 1 if any fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

fn load(kind: RhsKind, file: Option<&Path>, dim: usize) -> Result<Box<dyn ScalarField>> {
    Ok(match kind {
        RhsKind::Poly3 => Box::new(PolyProduct::tri_cubic(dim)),
        RhsKind::Const => Box::new(Constant(1.0)),
        RhsKind::File => {
            let path = file.ok_or_else(|| Error::InvalidArgument("--rhs file needs --rhs-file".into()))?;
            let poly = PolyProduct::parse(&std::fs::read_to_string(path)?)?;
            if poly.dim() != dim {
                return Err(Error::DimensionMismatch(format!("{} axes in {}, mesh has {dim}", poly.dim(), path.display())));
            }
            Box::new(poly)
        }
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn snapshot(stepper: &HeatStepper, u: &iga_pwc::tensor::CoefficientTensor, res: usize, scale: f64, path: &Path) -> Result<()> {
    let specs = stepper.config().spec_refs();
    let pts = grid_points(&specs, res);
    let s = evaluate(u, &specs, &pts)?;
    // row 0 of the image is the top edge
    let mut vals = vec![0.0; res * res];
    for (k, v) in s.values.iter().enumerate() {
        let (i, j) = (k % res, k / res);
        vals[(res - 1 - j) * res + i] = 255.0 * v / scale;
    }
    write_ppm(&PpmImage::gray(res, res, &vals), path)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Project { dim, common, rhs, rhs_file, samples, out } => {
            if common.elems.len() != dim {
                return Err(Error::InvalidArgument(format!("--dim {dim} with {} element counts", common.elems.len())));
            }
            let cfg = common.config()?;
            let f = load(rhs, rhs_file.as_deref(), dim)?;
            let u = l2_project(&cfg, f.as_ref())?;
            let specs = cfg.spec_refs();
            let err = l2_error(&u, &specs, f.as_ref(), &gauss_legendre(cfg.specs[0].degree() + 3)?)?;
            write(&out, &evaluate(&u, &specs, &grid_points(&specs, samples))?.to_csv())?;
            println!("nrdof={} l2_error={err:.6e}", bench::nrdof(&common.elems, common.degree));
        }
        Cmd::Laplace { common, bc, rhs, rhs_file, samples, out } => {
            let mut cfg = common.config()?;
            cfg.bc = bc;
            let f = load(rhs, rhs_file.as_deref(), 2)?;
            let u = laplace_solve(&cfg, f.as_ref(), BoundaryData::homogeneous())?;
            let specs = cfg.spec_refs();
            let s = evaluate(&u, &specs, &grid_points(&specs, samples))?;
            write(&out, &s.to_csv())?;
            println!("nrdof={} max={:.6e}", u.len(), s.max_abs());
        }
        Cmd::Dynamics { common, dt, steps, snapshot_every, resolution, out_dir } => {
            let mut cfg = common.config()?;
            cfg.dt = dt;
            cfg.steps = steps;
            let limit = cfg.stability_limit();
            if dt > limit {
                eprintln!("warning: dt={dt:e} exceeds the heuristic stability limit {limit:e}");
            }
            std::fs::create_dir_all(&out_dir)?;
            let stepper = HeatStepper::new(&cfg, FactorPath::Kronecker)?;
            let pi = std::f64::consts::PI;
            let u0 = |x: &[f64]| (pi * x[0]).sin() * (pi * x[1]).sin();
            let mut u = stepper.initial(&u0)?;
            let every = snapshot_every.max(1);
            for k in 0..=steps {
                if k % every == 0 || k == steps {
                    snapshot(&stepper, &u, resolution, 1.0, &out_dir.join(format!("step_{k:06}.ppm")))?;
                }
                if k < steps {
                    u = stepper.explicit_step(&u, None)?;
                }
            }
            let exact = |x: &[f64]| (-2.0 * pi * pi * dt * steps as f64).exp() * u0(x);
            let err = l2_error(&u, &cfg.spec_refs(), &exact, &gauss_legendre(common.degree + 3)?)?;
            println!("steps={steps} l2_error={err:.6e}");
        }
        Cmd::Bitmap { input, elems, degree, method, family, out, err_csv } => {
            let img = read_ppm(&input)?;
            let mut cfg = ProblemConfig::uniform(&[elems, elems], degree, method)?;
            cfg.family = family;
            let r = bitmap_project(&img, &cfg)?;
            write_ppm(&r.image, &out)?;
            let mut csv = String::from("channel,rel_l2,rms,pixel_rms\n");
            for (c, name) in ["r", "g", "b"].iter().enumerate() {
                csv.push_str(&format!("{name},{:e},{:e},{:e}\n", r.rel_l2[c], r.rms[c], r.pixel_rms[c]));
            }
            match err_csv {
                Some(p) => write(&p, &csv)?,
                None => print!("{csv}"),
            }
        }
        Cmd::Bench { case, sizes, degrees, methods, max_size, repeats, out } => {
            let cap = max_size.unwrap_or(match case {
                BenchCase::Projection => 64,
                BenchCase::Laplace => 256,
            });
            if let Some(n) = sizes.iter().find(|&&n| n > cap) {
                return Err(Error::InvalidArgument(format!("size {n} above the cap {cap}; raise --max-size")));
            }
            let opts = BenchOptions { repeats, ..BenchOptions::default() };
            let recs = match case {
                BenchCase::Projection => bench::bench_projection(&sizes, &degrees, &methods, &opts),
                BenchCase::Laplace => bench::bench_laplace(&sizes, &degrees, &methods, &opts),
            };
            for r in &recs {
                if let Some(why) = &r.failure {
                    eprintln!("{:?} p={} {}: {why}", r.elems, r.p, r.method);
                }
            }
            write(&out, &bench::to_csv(&recs))?;
        }
        Cmd::Verify { suite } => {
            let reports = verify_equivalence(suite)?;
            for r in &reports {
                println!("{r}");
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
