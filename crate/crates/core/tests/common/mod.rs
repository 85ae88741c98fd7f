//! Test-side oracles built without the library's solvers.
#![allow(dead_code)]

/// Dense Kronecker product `A_last ⊗ ... ⊗ A_first` of row-major square
/// factors, first factor's index fastest.
pub fn kron(factors: &[Vec<Vec<f64>>]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0]];
    for a in factors {
        let (n, m) = (out.len(), a.len());
        let mut next = vec![vec![0.0; n * m]; n * m];
        for (i_new, row) in a.iter().enumerate() {
            for (j_new, &v) in row.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                for i in 0..n {
                    for j in 0..n {
                        next[i + n * i_new][j + n * j_new] = out[i][j] * v;
                    }
                }
            }
        }
        out = next;
    }
    out
}

/// Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            if m == 0.0 {
                continue;
            }
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * b[j]).sum();
        b[k] = (b[k] - s) / a[k][k];
    }
    b
}

/// Deterministic values in [-1, 1).
pub fn pseudo_random(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..n)
        .map(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
        .collect()
}

/// Cox-de Boor recursion on a knot vector, straight from the definition.
pub fn cox_de_boor(knots: &[f64], i: usize, p: usize, x: f64) -> f64 {
    if p == 0 {
        let last = knots[knots.len() - 1];
        let hit = knots[i] <= x && (x < knots[i + 1] || (x == last && knots[i + 1] == last && knots[i] < last));
        return if hit { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let d1 = knots[i + p] - knots[i];
    if d1 > 0.0 {
        v += (x - knots[i]) / d1 * cox_de_boor(knots, i, p - 1, x);
    }
    let d2 = knots[i + p + 1] - knots[i + 1];
    if d2 > 0.0 {
        v += (knots[i + p + 1] - x) / d2 * cox_de_boor(knots, i + 1, p - 1, x);
    }
    v
}

pub fn uniform_knots(n_elems: usize, p: usize) -> Vec<f64> {
    let mut k = vec![0.0; p];
    k.extend((0..=n_elems).map(|i| i as f64 / n_elems as f64));
    k.extend(vec![1.0; p]);
    k
}
