mod common;

use approx::assert_abs_diff_eq;

use iga_pwc::assembly::{
    boundary_rows, laplace_2d_strong, mass_1d_pwc, Constant, PolyProduct, Side, Tests,
};
use iga_pwc::bspline::make_uniform_clamped;
use iga_pwc::harness::PpmImage;
use iga_pwc::problems::{
    bitmap_project, evaluate, grid_points, l2_error, l2_project, laplace_solve, BoundaryData, FactorPath,
    HeatStepper, Method, ProblemConfig,
};
use iga_pwc::quadrature::gauss_legendre;
use iga_pwc::tensor::Tensor;
use iga_pwc::testspace::{default_pwc, greville_pwc, wellposedness_report};

const METHODS: [Method; 2] = [Method::Galerkin, Method::Pwc];

fn sin_sin(x: &[f64]) -> f64 {
    let pi = std::f64::consts::PI;
    (pi * x[0]).sin() * (pi * x[1]).sin()
}

#[test]
fn constants_give_constant_coefficients() {
    for m in METHODS {
        let cfg = ProblemConfig::uniform(&[4, 5, 3], 2, m).unwrap();
        let u = l2_project(&cfg, &Constant(2.5)).unwrap();
        assert!(u.values().iter().all(|c| (c - 2.5).abs() < 1e-10), "{m}");
    }
}

#[test]
fn tri_cubic_refinement_reduces_error() {
    let f = PolyProduct::tri_cubic(3);
    let rule = gauss_legendre(5).unwrap();
    for m in METHODS {
        let err = |n: usize| {
            let cfg = ProblemConfig::uniform(&[n; 3], 2, m).unwrap();
            let u = l2_project(&cfg, &f).unwrap();
            l2_error(&u, &cfg.spec_refs(), &f, &rule).unwrap()
        };
        let (coarse, fine) = (err(8), err(16));
        assert!(fine <= coarse, "{m}: {fine} > {coarse}");
    }
}

#[test]
fn x_squared_is_in_the_space() {
    let f = |x: &[f64]| x[0] * x[0];
    for m in METHODS {
        let cfg = ProblemConfig::uniform(&[6], 2, m).unwrap();
        let u = l2_project(&cfg, &f).unwrap();
        let e = l2_error(&u, &cfg.spec_refs(), &f, &gauss_legendre(4).unwrap()).unwrap();
        assert!(e <= 1e-10, "{m}: {e}");
    }
}

#[test]
fn l2_error_trivial_cases() {
    let s = make_uniform_clamped(0.0, 1.0, 3, 2).unwrap();
    let specs = [&s, &s];
    let rule = gauss_legendre(4).unwrap();
    let zero = Tensor::zeros(&[5, 5]);
    assert_abs_diff_eq!(l2_error(&zero, &specs, &Constant(1.0), &rule).unwrap(), 1.0, epsilon = 1e-12);

    let c = Tensor::from_vec(&[5, 5], common::pseudo_random(25, 3)).unwrap();
    let own = |x: &[f64]| evaluate(&c, &specs, &[x.to_vec()]).unwrap().values[0];
    assert!(l2_error(&c, &specs, &own, &rule).unwrap() <= 1e-13);
}

#[test]
fn evaluate_matches_full_sum() {
    let (nx, ny, p) = (5, 3, 2);
    let sx = make_uniform_clamped(0.0, 1.0, nx, p).unwrap();
    let sy = make_uniform_clamped(0.0, 1.0, ny, p).unwrap();
    let (kx, ky) = (common::uniform_knots(nx, p), common::uniform_knots(ny, p));
    let dims = [sx.num_basis(), sy.num_basis()];
    let c = Tensor::from_vec(&dims, common::pseudo_random(dims[0] * dims[1], 11)).unwrap();
    let pts = grid_points(&[&sx, &sy], 9);
    let got = evaluate(&c, &[&sx, &sy], &pts).unwrap();
    for (x, v) in pts.iter().zip(&got.values) {
        let mut want = 0.0;
        for j in 0..dims[1] {
            for i in 0..dims[0] {
                want += c.get(&[i, j]) * common::cox_de_boor(&kx, i, p, x[0]) * common::cox_de_boor(&ky, j, p, x[1]);
            }
        }
        assert_abs_diff_eq!(*v, want, epsilon = 1e-12);
    }
}

#[test]
fn laplace_zero_data_gives_zero() {
    for m in METHODS {
        let cfg = ProblemConfig::uniform(&[6, 6], 2, m).unwrap();
        let u = laplace_solve(&cfg, &Constant(0.0), BoundaryData::homogeneous()).unwrap();
        assert!(u.values().iter().all(|v| v.abs() <= 1e-11));
    }
}

#[test]
fn laplace_reproduces_linear_field() {
    let lin = |x: &[f64]| 2.0 * x[0] - x[1] + 0.5;
    for m in METHODS {
        let cfg = ProblemConfig::uniform(&[5, 7], 2, m).unwrap();
        let bd = BoundaryData { dirichlet: &lin, flux: &Constant(0.0) };
        let u = laplace_solve(&cfg, &Constant(0.0), bd).unwrap();
        let specs = cfg.spec_refs();
        let pts = grid_points(&specs, 11);
        let s = evaluate(&u, &specs, &pts).unwrap();
        for (x, v) in pts.iter().zip(&s.values) {
            assert_abs_diff_eq!(*v, lin(x), epsilon = 1e-10);
        }
    }
}

#[test]
fn pwc_interior_rows_annihilate_linear_field() {
    let s = make_uniform_clamped(0.0, 1.0, 6, 2).unwrap();
    let t = Tests::Pwc(greville_pwc(&s));
    let a = laplace_2d_strong([&s, &s], [&t, &t], &gauss_legendre(3).unwrap(), &[]).unwrap();
    let g = s.greville();
    let n = s.num_basis();
    // coefficients of u = x are the Greville abscissae
    let c: Vec<f64> = (0..n * n).map(|k| g[k % n]).collect();
    let r = a.matvec(&c);
    let bnd = boundary_rows(n, n, &Side::ALL);
    for (i, v) in r.iter().enumerate() {
        if !bnd.contains(&i) {
            assert!(v.abs() <= 1e-11, "row {i}: {v}");
        }
    }
}

#[test]
fn galerkin_laplace_converges_at_order_p_plus_one() {
    let pi = std::f64::consts::PI;
    let f = |x: &[f64]| 2.0 * pi * pi * sin_sin(x);
    let rule = gauss_legendre(5).unwrap();
    let errs: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&n| {
            let cfg = ProblemConfig::uniform(&[n, n], 2, Method::Galerkin).unwrap();
            let u = laplace_solve(&cfg, &f, BoundaryData::homogeneous()).unwrap();
            l2_error(&u, &cfg.spec_refs(), &sin_sin, &rule).unwrap()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order >= 2.7, "{errs:?}");
    }
}

#[test]
fn heat_zero_step_is_identity() {
    for m in METHODS {
        let cfg = ProblemConfig::uniform(&[6, 6], 2, m).unwrap();
        let st = HeatStepper::new(&cfg, FactorPath::Kronecker).unwrap();
        let u = st.initial(&sin_sin).unwrap();
        let v = st.explicit_step(&u, None).unwrap();
        assert!(u.max_abs_diff(&v) <= 1e-12, "{m}");
    }
}

#[test]
fn heat_norm_does_not_grow() {
    for m in METHODS {
        for path in [FactorPath::Kronecker, FactorPath::Assembled] {
            let mut cfg = ProblemConfig::uniform(&[8, 8], 2, m).unwrap();
            cfg.dt = 0.5 * cfg.stability_limit();
            let st = HeatStepper::new(&cfg, path).unwrap();
            let rule = gauss_legendre(4).unwrap();
            let norm = |u: &Tensor| l2_error(u, &cfg.spec_refs(), &Constant(0.0), &rule).unwrap();
            let mut u = st.initial(&sin_sin).unwrap();
            let mut last = norm(&u);
            for _ in 0..50 {
                u = st.explicit_step(&u, None).unwrap();
                let now = norm(&u);
                assert!(now <= last * (1.0 + 1e-12), "{m} {path:?}");
                last = now;
            }
        }
    }
}

#[test]
fn kronecker_and_assembled_paths_agree() {
    let mut cfg = ProblemConfig::uniform(&[6, 7], 2, Method::Pwc).unwrap();
    cfg.dt = 1e-4;
    let a = HeatStepper::new(&cfg, FactorPath::Kronecker).unwrap();
    let b = HeatStepper::new(&cfg, FactorPath::Assembled).unwrap();
    let u = a.initial(&sin_sin).unwrap();
    assert!(a.explicit_step(&u, None).unwrap().max_abs_diff(&b.explicit_step(&u, None).unwrap()) <= 1e-12);
}

#[test]
fn gray_image_is_reproduced() {
    let img = PpmImage::gray(20, 12, &vec![93.0; 240]);
    for m in METHODS {
        let r = bitmap_project(&img, &ProblemConfig::uniform(&[5, 5], 2, m).unwrap()).unwrap();
        assert_eq!(r.image, img);
        assert!(r.rel_l2.iter().all(|&e| e <= 1e-9));
    }
}

#[test]
fn smooth_image_is_nearly_exact() {
    let n = 48;
    let mut ch = vec![Vec::new(); 3];
    for row in 0..n {
        for col in 0..n {
            let (x, y) = ((col as f64 + 0.5) / n as f64, (row as f64 + 0.5) / n as f64);
            ch[0].push((40.0 + 150.0 * x * y).round());
            ch[1].push((200.0 - 100.0 * x * x + 30.0 * y).round());
            ch[2].push((20.0 + 200.0 * y * (1.0 - y)).round());
        }
    }
    let img = PpmImage::from_channels(n, n, [&ch[0], &ch[1], &ch[2]]);
    for m in METHODS {
        let r = bitmap_project(&img, &ProblemConfig::uniform(&[n, n], 2, m).unwrap()).unwrap();
        assert!(r.pixel_rms.iter().all(|&e| e <= 0.5), "{m}: {:?}", r.pixel_rms);
    }
}

#[test]
fn pwc_families_are_well_posed() {
    let rule = gauss_legendre(4).unwrap();
    for p in 1..=3 {
        for n in 2..=64 {
            let s = make_uniform_clamped(0.0, 1.0, n, p).unwrap();
            let g = mass_1d_pwc(&s, &greville_pwc(&s), &rule).unwrap().to_dense();
            assert!(wellposedness_report(&g).ok, "greville p={p} n={n}");
            let d = mass_1d_pwc(&s, &default_pwc(&s), &rule).unwrap().to_dense();
            assert!(wellposedness_report(&d).ok, "equal width p={p} n={n}");
        }
    }
}
