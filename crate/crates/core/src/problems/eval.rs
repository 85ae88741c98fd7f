use crate::assembly::ScalarField;
use crate::bspline::BasisSpec;
use crate::error::{Error, Result};
use crate::quadrature::QuadRule;
use crate::tensor::CoefficientTensor;

/// Solution values at a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl FieldSample {
    /// CSV with columns `x[,y[,z]],value`.
    pub fn to_csv(&self) -> String {
        let dim = self.points.first().map_or(1, Vec::len);
        let mut s = ["x", "y", "z"][..dim].join(",");
        s.push_str(",value\n");
        for (p, v) in self.points.iter().zip(&self.values) {
            for c in p {
                s.push_str(&format!("{c},"));
            }
            s.push_str(&format!("{v}\n"));
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check(coeffs: &CoefficientTensor, specs: &[&BasisSpec]) -> Result<()> {
    let want: Vec<usize> = specs.iter().map(|s| s.num_basis()).collect();
    if coeffs.dims() != want.as_slice() {
        return Err(Error::DimensionMismatch(format!(
            "coefficients {:?} against bases {want:?}",
            coeffs.dims()
        )));
    }
    Ok(())
}

/// Sum over the local tensor of `(first, values)` per axis.
fn local_sum(coeffs: &CoefficientTensor, local: &[(usize, &[f64])]) -> f64 {
    let unit: (usize, &[f64]) = (0, &[1.0]);
    let ax = &local[0];
    let ay = local.get(1).unwrap_or(&unit);
    let az = local.get(2).unwrap_or(&unit);
    let dims = coeffs.dims();
    let nx = dims[0];
    let ny = dims.get(1).copied().unwrap_or(1);
    let c = coeffs.values();
    let mut s = 0.0;
    for (k, bz) in az.1.iter().enumerate() {
        for (j, by) in ay.1.iter().enumerate() {
            let base = nx * ((ay.0 + j) + ny * (az.0 + k));
            let byz = by * bz;
            for (i, bx) in ax.1.iter().enumerate() {
                s += c[base + ax.0 + i] * bx * byz;
            }
        }
    }
    s
}

/// `u_h(x) = Σ u_i Π B(x)` at each point.
pub fn evaluate(coeffs: &CoefficientTensor, specs: &[&BasisSpec], points: &[Vec<f64>]) -> Result<FieldSample> {
    check(coeffs, specs)?;
    let mut values = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != specs.len() {
            return Err(Error::DimensionMismatch(format!("point {p:?} in {} dimensions", specs.len())));
        }
        let local = specs
            .iter()
            .zip(p)
            .map(|(s, &x)| s.eval_nonzero(x))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(usize, &[f64])> = local.iter().map(|(f, v)| (*f, v.as_slice())).collect();
        values.push(local_sum(coeffs, &refs));
    }
    Ok(FieldSample { points: points.to_vec(), values })
}

/// `n` equally spaced points per axis, endpoints included, first axis fastest.
pub fn grid_points(specs: &[&BasisSpec], n: usize) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = specs
        .iter()
        .map(|s| {
            let (a, b) = s.domain();
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1).max(1) as f64).collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for ax in &axes {
        let mut next = Vec::with_capacity(out.len() * ax.len());
        for &x in ax {
            for p in &out {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    // the loop above makes the last axis fastest; reverse the nesting
    out.sort_by(|a, b| {
        for d in (0..a.len()).rev() {
            match a[d].partial_cmp(&b[d]).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
    out
}

/// `sqrt(∫ (u_h - exact)^2)` by composite Gauss over the trial elements.
pub fn l2_error(
    coeffs: &CoefficientTensor,
    specs: &[&BasisSpec],
    exact: &dyn ScalarField,
    rule: &QuadRule,
) -> Result<f64> {
    check(coeffs, specs)?;
    let dim = specs.len();
    // per axis, per element: (points, weights, first, values per point)
    type AxisData = Vec<(Vec<f64>, Vec<f64>, usize, Vec<Vec<f64>>)>;
    let mut axes: Vec<AxisData> = Vec::new();
    for s in specs {
        let mut v = Vec::new();
        for e in 0..s.num_elements() {
            let (lo, hi) = s.element_bounds(e);
            let (x, w) = rule.map_to_interval(lo, hi)?;
            let b = x
                .iter()
                .map(|&xq| {
                    let mut out = vec![0.0; s.degree() + 1];
                    s.basis_in_element(e, xq, &mut out);
                    out
                })
                .collect();
            v.push((x, w, e, b));
        }
        axes.push(v);
    }
    while axes.len() < 3 {
        axes.push(vec![(vec![0.0], vec![1.0], 0, vec![vec![1.0]])]);
    }
    let mut sum = 0.0;
    let mut pt = [0.0; 3];
    for ez in &axes[2] {
        for ey in &axes[1] {
            for ex in &axes[0] {
                for qz in 0..ez.0.len() {
                    for qy in 0..ey.0.len() {
                        for qx in 0..ex.0.len() {
                            pt[0] = ex.0[qx];
                            pt[1] = ey.0[qy];
                            pt[2] = ez.0[qz];
                            let local = [
                                (ex.2, ex.3[qx].as_slice()),
                                (ey.2, ey.3[qy].as_slice()),
                                (ez.2, ez.3[qz].as_slice()),
                            ];
                            let uh = local_sum(coeffs, &local[..dim]);
                            let d = uh - exact.value(&pt[..dim]);
                            sum += ex.1[qx] * ey.1[qy] * ez.1[qz] * d * d;
                        }
                    }
                }
            }
        }
    }
    Ok(sum.sqrt())
}
