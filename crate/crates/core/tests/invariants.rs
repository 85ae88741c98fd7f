mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use iga_pwc::assembly::{apply_dirichlet, BandedMatrix, SparseMatrix};
use iga_pwc::bspline::make_uniform_clamped;
use iga_pwc::harness::PpmImage;
use iga_pwc::quadrature::gauss_legendre;
use iga_pwc::solver::{adi_solve, BandedLU};
use iga_pwc::tensor::Tensor;
use iga_pwc::testspace::{default_pwc, greville_pwc};

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Diagonally dominant banded matrix with pseudo-random entries.
fn banded(n: usize, kl: usize, ku: usize, seed: u64) -> BandedMatrix {
    let r = common::pseudo_random(n * (kl + ku + 1), seed);
    let mut m = BandedMatrix::zeros(n, kl, ku);
    let mut k = 0;
    for i in 0..n {
        for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
            m.set(i, j, r[k]);
            k += 1;
        }
        m.add(i, i, (kl + ku + 2) as f64);
    }
    m
}

fn dense(m: &BandedMatrix) -> Vec<Vec<f64>> {
    (0..m.n()).map(|i| (0..m.n()).map(|j| m.get(i, j)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_matches_cox_de_boor(n in 1usize..10, p in 0usize..5, t in 0.0f64..=1.0) {
        let s = make_uniform_clamped(0.0, 1.0, n, p).unwrap();
        let knots = common::uniform_knots(n, p);
        let (first, vals) = s.eval_nonzero(t).unwrap();
        let mut full = vec![0.0; s.num_basis()];
        for (k, v) in vals.iter().enumerate() {
            full[first + k] = *v;
        }
        for (i, v) in full.iter().enumerate() {
            prop_assert!((v - common::cox_de_boor(&knots, i, p, t)).abs() < 1e-12);
        }
        prop_assert!(vals.iter().all(|&v| v >= -1e-15));
        prop_assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn derivatives_sum_to_zero(n in 1usize..10, p in 1usize..5, t in 0.0f64..=1.0, order in 1usize..4) {
        let s = make_uniform_clamped(0.0, 1.0, n, p).unwrap();
        prop_assume!(order <= p);
        let (_, d) = s.eval_nonzero_deriv(t, order).unwrap();
        prop_assert!(d.iter().sum::<f64>().abs() < 1e-8 * (n as f64).powi(order as i32));
    }

    #[test]
    fn gauss_exact_for_degree_2n_minus_1(n in 1usize..=10, a in -3.0f64..3.0, w in 0.1f64..4.0, c in prop::collection::vec(-1.0f64..1.0, 20)) {
        let b = a + w;
        let deg = 2 * n - 1;
        let rule = gauss_legendre(n).unwrap();
        let got = rule.integrate(a, b, |x| c[..=deg].iter().rev().fold(0.0, |s, &k| s * x + k)).unwrap();
        // antiderivative term by term
        let want: f64 = c[..=deg]
            .iter()
            .enumerate()
            .map(|(k, &ck)| ck * (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / (k + 1) as f64)
            .sum();
        let scale = 1.0 + a.abs().max(b.abs()).powi(deg as i32 + 1);
        prop_assert!((got - want).abs() <= 1e-12 * scale);
    }

    #[test]
    fn banded_lu_matches_gauss(n in 1usize..40, kl in 0usize..4, ku in 0usize..4, seed in any::<u64>()) {
        let m = banded(n, kl, ku, seed);
        let b = common::pseudo_random(n, seed ^ 7);
        let mut x = b.clone();
        BandedLU::factor(&m).unwrap().solve(&mut x).unwrap();
        let want = common::gauss_solve(dense(&m), b);
        prop_assert!(max_diff(&x, &want) < 1e-10);
    }

    #[test]
    fn multi_rhs_equals_single(n in 1usize..20, ncols in 1usize..80, seed in any::<u64>()) {
        let lu = BandedLU::factor(&banded(n, 2, 2, seed)).unwrap();
        let data = common::pseudo_random(n * ncols, seed);
        let mut all = data.clone();
        lu.solve_multi_rhs(&mut all, ncols).unwrap();
        for c in 0..ncols {
            let mut col = data[c * n..(c + 1) * n].to_vec();
            lu.solve(&mut col).unwrap();
            prop_assert_eq!(&col[..], &all[c * n..(c + 1) * n]);
        }
    }

    #[test]
    fn adi_matches_kronecker(dims in prop::collection::vec(1usize..6, 1..=3), seed in any::<u64>()) {
        let mats: Vec<BandedMatrix> = dims.iter().enumerate().map(|(d, &n)| banded(n, 1, 2, seed + d as u64)).collect();
        let lus: Vec<BandedLU> = mats.iter().map(|m| BandedLU::factor(m).unwrap()).collect();
        let n: usize = dims.iter().product();
        let b = common::pseudo_random(n, seed);
        let u = adi_solve(&lus.iter().collect::<Vec<_>>(), &Tensor::from_vec(&dims, b.clone()).unwrap()).unwrap();
        let want = common::gauss_solve(common::kron(&mats.iter().map(dense).collect::<Vec<_>>()), b);
        prop_assert!(max_diff(u.values(), &want) < 1e-10);
    }

    #[test]
    fn triplets_accumulate(entries in prop::collection::vec((0usize..6, 0usize..5, -5.0f64..5.0), 0..40)) {
        let s = SparseMatrix::from_triplets(6, 5, entries.clone()).unwrap();
        let mut d = vec![vec![0.0; 5]; 6];
        for &(i, j, v) in &entries {
            d[i][j] += v;
        }
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                prop_assert!((s.get(i, j) - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dirichlet_row_is_unit(n in 2usize..10, r in 0usize..10, seed in any::<u64>()) {
        prop_assume!(r < n);
        let vals = common::pseudo_random(n * n, seed);
        let trip: Vec<_> = (0..n * n).map(|k| (k / n, k % n, vals[k])).collect();
        let orig = SparseMatrix::from_triplets(n, n, trip).unwrap();
        let mut a = orig.clone();
        let mut rhs = common::pseudo_random(n, seed ^ 1);
        let rhs0 = rhs.clone();
        apply_dirichlet(&mut a, &mut rhs, &[r]).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i == r { f64::from(u8::from(i == j)) } else { orig.get(i, j) };
                prop_assert_eq!(a.get(i, j), want);
            }
            prop_assert_eq!(rhs[i], if i == r { 0.0 } else { rhs0[i] });
        }
    }

    #[test]
    fn ppm_round_trip(w in 1usize..17, h in 1usize..17, seed in any::<u64>()) {
        let mut img = PpmImage::new(w, h);
        let r = common::pseudo_random(img.data.len(), seed);
        for (b, v) in img.data.iter_mut().zip(r) {
            *b = ((v + 1.0) * 127.9) as u8;
        }
        let bin = img.encode_p6();
        let back = PpmImage::decode(&bin).unwrap();
        prop_assert_eq!(&back, &img);
        prop_assert_eq!(back.encode_p6(), bin);
        prop_assert_eq!(PpmImage::decode(img.encode_p3().as_bytes()).unwrap(), img);
    }

    #[test]
    fn pwc_families_are_aligned(n in 1usize..40, p in 0usize..4) {
        let s = make_uniform_clamped(0.0, 1.0, n, p).unwrap();
        for t in [default_pwc(&s), greville_pwc(&s)] {
            prop_assert_eq!(t.len(), s.num_basis());
            t.check_aligned(&s).unwrap();
            let cover: f64 = t.intervals().iter().map(|(a, b)| b - a).sum();
            prop_assert!(cover > 0.0);
        }
    }
}

#[test]
fn basis_at_right_endpoint() {
    let s = make_uniform_clamped(0.0, 1.0, 4, 3).unwrap();
    let (first, v) = s.eval_nonzero(1.0).unwrap();
    assert_eq!(first + v.len(), s.num_basis());
    assert_abs_diff_eq!(*v.last().unwrap(), 1.0, epsilon = 1e-15);
}
