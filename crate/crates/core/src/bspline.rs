//! Clamped B-spline bases on an interval.
//!
//! Basis functions are indexed from 0. A basis of degree `p` over `N_e`
//! elements has `N = N_e + p` functions; on element `e` the nonzero functions
//! are `e, e + 1, ..., e + p`.
//!
//! Supports follow the knot vector: function `i` lives on
//! `[t_i, t_{i+p+1}]`. For the knot vector `[0 0 0 1 2 3 4 5 5 5]` this gives
//! `[2, 5]` and `[3, 5]` for the fifth and sixth functions; older write-ups of
//! this example list `[2, 4]` and `[3, 4]`, which is a typo.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    values: Vec<f64>,
    degree: usize,
}

impl KnotVector {
    /// Validates an open (clamped) knot vector with simple interior knots.
    pub fn new(degree: usize, values: Vec<f64>) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(invalid(format!("degree {degree} exceeds {MAX_DEGREE}")));
        }
        if values.len() < 2 * degree + 2 {
            return Err(invalid(format!(
                "{} knots cannot form a clamped vector of degree {degree}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("knots must be finite"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("knots must be non-decreasing"));
        }
        let n = values.len() - degree - 1;
        let (a, b) = (values[0], values[values.len() - 1]);
        if values[..=degree].iter().any(|&v| v != a) || values[n..].iter().any(|&v| v != b) {
            return Err(invalid("end knots must repeat degree + 1 times"));
        }
        // t_p < t_{p+1} < ... < t_n: exactly p+1 end repeats, simple interior knots
        if values[degree..=n].windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid(
                "repeated interior knots are not supported (basis must stay C^{p-1})",
            ));
        }
        Ok(Self { values, degree })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_basis(&self) -> usize {
        self.values.len() - self.degree - 1
    }
}

impl fmt::Display for KnotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree)?;
        for v in &self.values {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl FromStr for KnotVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let degree = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty knot vector".into()))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("degree: {e}")))?;
        let values = tokens
            .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("knot {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        KnotVector::new(degree, values)
    }
}

/// A B-spline basis: knot vector plus the element partition it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    knots: KnotVector,
    breaks: Vec<f64>,
}

impl BasisSpec {
    pub fn new(knots: KnotVector) -> Self {
        let p = knots.degree();
        let n = knots.num_basis();
        let breaks = knots.values()[p..=n].to_vec();
        Self { knots, breaks }
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.knots.degree
    }

    pub fn num_basis(&self) -> usize {
        self.knots.num_basis()
    }

    pub fn num_elements(&self) -> usize {
        self.breaks.len() - 1
    }

    /// Element boundaries, endpoints included.
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        (self.breaks[e], self.breaks[e + 1])
    }

    /// Element containing `x`; the right endpoint belongs to the last element
    /// and interior knots belong to the element on their right.
    pub fn find_element(&self, x: f64) -> Result<usize> {
        let (a, b) = self.domain();
        if !(a..=b).contains(&x) {
            return Err(Error::OutOfDomain { x, lo: a, hi: b });
        }
        let ne = self.num_elements();
        if x >= b {
            return Ok(ne - 1);
        }
        // first break strictly greater than x, minus one
        let idx = self.breaks.partition_point(|&t| t <= x);
        Ok(idx - 1)
    }

    /// Values of the `p + 1` functions that may be nonzero at `x`, starting
    /// at the returned index.
    pub fn eval_nonzero(&self, x: f64) -> Result<(usize, Vec<f64>)> {
        let e = self.find_element(x)?;
        let mut out = vec![0.0; self.degree() + 1];
        self.basis_in_element(e, x, &mut out);
        Ok((e, out))
    }

    /// `order`-th derivatives of the local functions at `x`. At interior knots
    /// the right-hand limit is returned.
    pub fn eval_nonzero_deriv(&self, x: f64, order: usize) -> Result<(usize, Vec<f64>)> {
        if order > self.degree() {
            return Err(invalid(format!(
                "derivative order {order} exceeds degree {}",
                self.degree()
            )));
        }
        let e = self.find_element(x)?;
        let mut ders = self.ders_in_element(e, x, order);
        Ok((e, ders.swap_remove(order)))
    }

    /// All derivatives `0..=nders` of the local functions at `x`.
    pub fn eval_ders(&self, x: f64, nders: usize) -> Result<(usize, Vec<Vec<f64>>)> {
        if nders > self.degree() {
            return Err(invalid(format!(
                "derivative order {nders} exceeds degree {}",
                self.degree()
            )));
        }
        let e = self.find_element(x)?;
        Ok((e, self.ders_in_element(e, x, nders)))
    }

    /// Support `[lo, hi]` of function `i`.
    pub fn support(&self, i: usize) -> Result<(f64, f64)> {
        let n = self.num_basis();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let t = self.knots.values();
        Ok((t[i], t[i + self.degree() + 1]))
    }

    /// Greville abscissae; element midpoints for degree 0.
    pub fn greville(&self) -> Vec<f64> {
        let p = self.degree();
        if p == 0 {
            return self.breaks.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        let t = self.knots.values();
        (0..self.num_basis())
            .map(|i| t[i + 1..=i + p].iter().sum::<f64>() / p as f64)
            .collect()
    }

    /// Local basis values on element `e` (Cox-de Boor triangle). `out` must
    /// hold `p + 1` entries. `x` is not range-checked.
    pub fn basis_in_element(&self, e: usize, x: f64, out: &mut [f64]) {
        let p = self.degree();
        let t = self.knots.values();
        let span = e + p;
        let mut left = [0.0; MAX_DEGREE + 1];
        let mut right = [0.0; MAX_DEGREE + 1];
        out[0] = 1.0;
        for j in 1..=p {
            left[j] = x - t[span + 1 - j];
            right[j] = t[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = out[r] / (right[r + 1] + left[j - r]);
                out[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            out[j] = saved;
        }
    }

    /// Local derivatives `0..=nders` on element `e`; `result[k][j]` is the
    /// k-th derivative of function `e + j`.
    pub fn ders_in_element(&self, e: usize, x: f64, nders: usize) -> Vec<Vec<f64>> {
        let p = self.degree();
        let t = self.knots.values();
        let span = e + p;
        let mut ndu = [[0.0; MAX_DEGREE + 1]; MAX_DEGREE + 1];
        let mut left = [0.0; MAX_DEGREE + 1];
        let mut right = [0.0; MAX_DEGREE + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = x - t[span + 1 - j];
            right[j] = t[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                // lower triangle holds knot differences
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }

        let mut ders = vec![vec![0.0; p + 1]; nders + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = [[0.0; MAX_DEGREE + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=nders {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let col = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][col];
                    d += a[s2][j] * ndu[col][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = p as f64;
        for (k, row) in ders.iter_mut().enumerate().skip(1) {
            for v in row.iter_mut() {
                *v *= factor;
            }
            factor *= (p - k) as f64;
        }
        ders
    }
}

/// Uniform clamped basis with `n_elems` equal elements on `[a, b]`.
pub fn make_uniform_clamped(a: f64, b: f64, n_elems: usize, p: usize) -> Result<BasisSpec> {
    if !(a < b) {
        return Err(invalid(format!("interval [{a}, {b}] is empty")));
    }
    if n_elems < 1 {
        return Err(invalid("at least one element is required"));
    }
    let mut values = Vec::with_capacity(n_elems + 2 * p + 1);
    values.extend(std::iter::repeat(a).take(p));
    for i in 0..=n_elems {
        let v = if i == n_elems {
            b
        } else {
            a + (b - a) * i as f64 / n_elems as f64
        };
        values.push(v);
    }
    values.extend(std::iter::repeat(b).take(p));
    Ok(BasisSpec::new(KnotVector::new(p, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Spline value with coefficient vector `c` by repeated knot insertion
    /// (de Boor's scheme); used as an oracle for the basis triangle.
    fn knot_insertion_value(t: &[f64], p: usize, c: &[f64], x: f64) -> f64 {
        let n = c.len();
        let mut k = p;
        while k + 1 < n && t[k + 1] <= x {
            k += 1;
        }
        let mut d: Vec<f64> = (0..=p).map(|j| c[j + k - p]).collect();
        for r in 1..=p {
            for j in (r..=p).rev() {
                let lo = t[j + k - p];
                let hi = t[j + 1 + k - r];
                let alpha = (x - lo) / (hi - lo);
                d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
            }
        }
        d[p]
    }

    #[test]
    fn uniform_knots_match_examples() {
        let s = make_uniform_clamped(0.0, 5.0, 5, 2).unwrap();
        assert_eq!(
            s.knots().values(),
            &[0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 5.0, 5.0]
        );
        assert_eq!(s.num_basis(), 7);

        let s = make_uniform_clamped(0.0, 1.0, 1, 0).unwrap();
        assert_eq!(s.knots().values(), &[0.0, 1.0]);
        assert_eq!(s.num_basis(), 1);

        let s = make_uniform_clamped(0.0, 5.0, 10, 2).unwrap();
        let expect = [
            0.0, 0.0, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.0, 5.0,
        ];
        assert_eq!(s.knots().values(), &expect);
        assert_eq!(s.num_basis(), 12);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_uniform_clamped(1.0, 1.0, 3, 2).is_err());
        assert!(make_uniform_clamped(2.0, 1.0, 3, 2).is_err());
        assert!(make_uniform_clamped(0.0, 1.0, 0, 2).is_err());
        assert!(make_uniform_clamped(0.0, 1.0, 4, 6).is_err());
        // repeated interior knot
        assert!(KnotVector::new(2, vec![0., 0., 0., 0.5, 0.5, 1., 1., 1.]).is_err());
        // not clamped
        assert!(KnotVector::new(2, vec![0., 0., 0.25, 0.5, 1., 1., 1.]).is_err());
        assert!(KnotVector::new(1, vec![0., 0., 1., 0.5, 1., 1.]).is_err());
    }

    #[test]
    fn endpoint_interpolation() {
        let s = make_uniform_clamped(0.0, 5.0, 5, 2).unwrap();
        let (first, v) = s.eval_nonzero(0.0).unwrap();
        assert_eq!(first, 0);
        assert_eq!(v, vec![1.0, 0.0, 0.0]);
        let (first, v) = s.eval_nonzero(5.0).unwrap();
        assert_eq!(first, 4);
        assert_abs_diff_eq!(v[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partition_of_unity_at_midpoint() {
        let s = make_uniform_clamped(0.0, 5.0, 5, 2).unwrap();
        let (_, v) = s.eval_nonzero(2.5).unwrap();
        assert_abs_diff_eq!(v.iter().sum::<f64>(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn matches_knot_insertion_oracle() {
        let s = make_uniform_clamped(0.0, 1.0, 4, 2).unwrap();
        let x = 0.375;
        let (first, v) = s.eval_nonzero(x).unwrap();
        let n = s.num_basis();
        for i in 0..n {
            let mut c = vec![0.0; n];
            c[i] = 1.0;
            let oracle = knot_insertion_value(s.knots().values(), 2, &c, x);
            let got = if (first..first + 3).contains(&i) { v[i - first] } else { 0.0 };
            assert_abs_diff_eq!(got, oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn zeroth_derivative_is_value() {
        let s = make_uniform_clamped(0.0, 1.0, 7, 3).unwrap();
        for &x in &[0.0, 0.11, 0.5, 0.93, 1.0] {
            assert_eq!(s.eval_nonzero_deriv(x, 0).unwrap(), s.eval_nonzero(x).unwrap());
        }
    }

    #[test]
    fn first_derivatives_sum_to_zero() {
        let s = make_uniform_clamped(0.0, 5.0, 5, 2).unwrap();
        let (_, d) = s.eval_nonzero_deriv(2.5, 1).unwrap();
        assert_abs_diff_eq!(d.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let s = make_uniform_clamped(0.0, 1.0, 4, 2).unwrap();
        let (x, h) = (0.3, 1e-6);
        let (first, d) = s.eval_nonzero_deriv(x, 1).unwrap();
        let (fp, vp) = s.eval_nonzero(x + h).unwrap();
        let (fm, vm) = s.eval_nonzero(x - h).unwrap();
        assert_eq!((first, fp, fm), (1, 1, 1));
        for j in 0..3 {
            assert_abs_diff_eq!(d[j], (vp[j] - vm[j]) / (2.0 * h), epsilon = 1e-6);
        }
    }

    #[test]
    fn second_derivative_matches_difference_of_first() {
        let s = make_uniform_clamped(0.0, 1.0, 6, 4).unwrap();
        let (x, h) = (0.41, 1e-6);
        let (_, d2) = s.eval_nonzero_deriv(x, 2).unwrap();
        let (_, dp) = s.eval_nonzero_deriv(x + h, 1).unwrap();
        let (_, dm) = s.eval_nonzero_deriv(x - h, 1).unwrap();
        for j in 0..5 {
            assert_abs_diff_eq!(d2[j], (dp[j] - dm[j]) / (2.0 * h), epsilon = 1e-4);
        }
    }

    #[test]
    fn derivative_order_above_degree_rejected() {
        let s = make_uniform_clamped(0.0, 1.0, 4, 2).unwrap();
        assert!(matches!(s.eval_nonzero_deriv(0.5, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn out_of_domain_rejected() {
        let s = make_uniform_clamped(0.0, 1.0, 4, 2).unwrap();
        assert!(matches!(s.eval_nonzero(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(s.eval_nonzero(-1e-9), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn supports() {
        let s = make_uniform_clamped(0.0, 5.0, 5, 2).unwrap();
        assert_eq!(s.support(0).unwrap(), (0.0, 1.0));
        assert_eq!(s.support(3).unwrap(), (1.0, 4.0));
        assert_eq!(s.support(4).unwrap(), (2.0, 5.0));
        assert_eq!(s.support(5).unwrap(), (3.0, 5.0));
        assert_eq!(s.support(6).unwrap(), (4.0, 5.0));
        assert!(matches!(s.support(7), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn knot_vector_text_round_trip() {
        let s = make_uniform_clamped(0.0, 5.0, 10, 2).unwrap();
        let text = s.knots().to_string();
        assert!(text.starts_with("2 0 0 0 0.5"));
        let back: KnotVector = text.parse().unwrap();
        assert_eq!(&back, s.knots());
        assert!("".parse::<KnotVector>().is_err());
        assert!("2 0 0 x 1 1 1".parse::<KnotVector>().is_err());
    }

    #[test]
    fn greville_points() {
        let s = make_uniform_clamped(0.0, 5.0, 5, 2).unwrap();
        assert_eq!(s.greville(), vec![0.0, 0.5, 1.5, 2.5, 3.5, 4.5, 5.0]);
    }

    fn spec_strategy() -> impl Strategy<Value = (BasisSpec, f64)> {
        (1usize..=5, 1usize..=12, 0.0f64..=1.0).prop_map(|(p, ne, u)| {
            (make_uniform_clamped(-1.0, 2.0, ne, p).unwrap(), -1.0 + 3.0 * u)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn partition_of_unity_and_sign((s, x) in spec_strategy()) {
            let (_, v) = s.eval_nonzero(x).unwrap();
            prop_assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(v.iter().all(|&b| b >= -1e-15));
        }

        #[test]
        fn local_support_respected((s, x) in spec_strategy()) {
            let (first, v) = s.eval_nonzero(x).unwrap();
            for (j, &b) in v.iter().enumerate() {
                let (lo, hi) = s.support(first + j).unwrap();
                if b != 0.0 {
                    prop_assert!(lo <= x && x <= hi);
                }
            }
        }

        #[test]
        fn derivative_sum_vanishes((s, x) in spec_strategy()) {
            prop_assume!(s.breaks().iter().all(|&k| (k - x).abs() > 1e-9));
            let (_, d) = s.eval_nonzero_deriv(x, 1).unwrap();
            prop_assert!(d.iter().sum::<f64>().abs() <= 1e-11);
        }
    }

    #[test]
    fn c1_continuity_at_interior_knots() {
        for p in 2..=5 {
            let s = make_uniform_clamped(0.0, 1.0, 6, p).unwrap();
            let n = s.num_basis();
            for e in 1..s.num_elements() {
                let k = s.breaks()[e];
                let left = s.ders_in_element(e - 1, k, 1);
                let right = s.ders_in_element(e, k, 1);
                // element e-1 covers functions e-1..e-1+p, element e covers e..e+p
                for i in 0..n {
                    let pick = |ders: &Vec<Vec<f64>>, first: usize, order: usize| {
                        if (first..=first + p).contains(&i) { ders[order][i - first] } else { 0.0 }
                    };
                    for order in 0..=1 {
                        let l = pick(&left, e - 1, order);
                        let r = pick(&right, e, order);
                        assert!((l - r).abs() <= 1e-10, "p={p} knot {k} fn {i} order {order}: {l} vs {r}");
                    }
                }
            }
        }
    }
}
