//! Piece-wise constant test sets and the row-summation construction over a
//! refined B-spline test space.

use std::fmt;
use std::str::FromStr;

use crate::assembly::DenseMatrix;
use crate::bspline::{make_uniform_clamped, BasisSpec};
use crate::error::{invalid, Error, Result};
use crate::solver::lu_pivots;

/// Indicator test functions, one per interval.
///
/// `refinement` records the grid the endpoints live on: every trial element
/// split into that many equal sub-cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PwcTestSet {
    intervals: Vec<(f64, f64)>,
    refinement: usize,
}

/// A piece of a test interval lying inside a single trial element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub lo: f64,
    pub hi: f64,
    pub element: usize,
}

impl PwcTestSet {
    pub fn new(intervals: Vec<(f64, f64)>, refinement: usize) -> Result<Self> {
        if refinement == 0 {
            return Err(invalid("refinement must be at least 1"));
        }
        if let Some(&(lo, hi)) = intervals.iter().find(|(lo, hi)| !(lo < hi)) {
            return Err(invalid(format!("empty test interval [{lo}, {hi}]")));
        }
        Ok(Self { intervals, refinement })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn refinement(&self) -> usize {
        self.refinement
    }

    fn tol(trial: &BasisSpec) -> f64 {
        let (a, b) = trial.domain();
        1e-10 * (b - a)
    }

    /// Checks that every endpoint lies in the domain and on the refined grid.
    pub fn check_aligned(&self, trial: &BasisSpec) -> Result<()> {
        let (a, b) = trial.domain();
        let r = self.refinement as f64;
        let tol = Self::tol(trial);
        let cells = self.refinement * trial.num_elements();
        for &(lo, hi) in &self.intervals {
            for x in [lo, hi] {
                if x < a - tol || x > b + tol {
                    return Err(Error::OutOfDomain { x, lo: a, hi: b });
                }
                let e = trial.find_element(x.clamp(a, b))?;
                let (t0, t1) = trial.element_bounds(e);
                let s = (x - t0) / (t1 - t0) * r;
                if (s - s.round()).abs() * (t1 - t0) / r > tol {
                    return Err(Error::NotAligned { lo, hi, cells });
                }
            }
        }
        Ok(())
    }

    /// Splits each interval at the trial breaks. Pieces shorter than the
    /// alignment tolerance are dropped.
    pub fn cells(&self, trial: &BasisSpec) -> Result<Vec<Vec<Cell>>> {
        self.check_aligned(trial)?;
        let (a, b) = trial.domain();
        let tol = Self::tol(trial);
        let breaks = trial.breaks();
        let snap = |x: f64| {
            let x = x.clamp(a, b);
            let i = breaks.partition_point(|&t| t < x);
            for j in [i.saturating_sub(1), i.min(breaks.len() - 1)] {
                if (breaks[j] - x).abs() <= tol {
                    return breaks[j];
                }
            }
            x
        };
        Ok(self
            .intervals
            .iter()
            .map(|&(lo, hi)| {
                let (lo, hi) = (snap(lo), snap(hi));
                let first = breaks.partition_point(|&t| t <= lo).saturating_sub(1);
                let mut out = Vec::new();
                for e in first..trial.num_elements() {
                    let (t0, t1) = trial.element_bounds(e);
                    if t0 >= hi {
                        break;
                    }
                    let (c0, c1) = (lo.max(t0), hi.min(t1));
                    if c1 - c0 > tol {
                        out.push(Cell { lo: c0, hi: c1, element: e });
                    }
                }
                out
            })
            .collect())
    }

    /// CSV with header `index,lo,hi`, 0-based indices.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,lo,hi\n");
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            s.push_str(&format!("{i},{lo},{hi}\n"));
        }
        s
    }

    pub fn from_csv(text: &str, refinement: usize) -> Result<Self> {
        let mut intervals = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line.starts_with("index") {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("expected index,lo,hi: {line:?}")));
            }
            let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
            let idx: usize = f[0].trim().parse().map_err(|e| Error::Parse(format!("{:?}: {e}", f[0])))?;
            if idx != intervals.len() {
                return Err(Error::Parse(format!("index {idx} out of sequence")));
            }
            intervals.push((num(f[1])?, num(f[2])?));
        }
        Self::new(intervals, refinement)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `N` equal-width intervals covering the domain.
pub fn default_pwc(trial: &BasisSpec) -> PwcTestSet {
    let n = trial.num_basis();
    let (a, b) = trial.domain();
    let h = (b - a) / n as f64;
    let intervals = (0..n)
        .map(|i| (a + i as f64 * h, if i + 1 == n { b } else { a + (i + 1) as f64 * h }))
        .collect();
    let ne = trial.num_elements();
    PwcTestSet { intervals, refinement: n / gcd(n, ne) }
}

/// Intervals between midpoints of consecutive Greville abscissae, closed off
/// by the domain ends.
pub fn greville_pwc(trial: &BasisSpec) -> PwcTestSet {
    let g = trial.greville();
    let (a, b) = trial.domain();
    let n = g.len();
    let mut ends = Vec::with_capacity(n + 1);
    ends.push(a);
    ends.extend(g.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    ends.push(b);
    let intervals = ends.windows(2).map(|w| (w[0], w[1])).collect();
    let p = trial.degree();
    PwcTestSet { intervals, refinement: if p == 0 { 1 } else { 2 * p } }
}

/// Selectable interval families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TestFamily {
    EqualWidth,
    #[default]
    Greville,
}

impl TestFamily {
    pub fn build(self, trial: &BasisSpec) -> PwcTestSet {
        match self {
            TestFamily::EqualWidth => default_pwc(trial),
            TestFamily::Greville => greville_pwc(trial),
        }
    }
}

impl FromStr for TestFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" | "equal-width" => Ok(TestFamily::EqualWidth),
            "greville" => Ok(TestFamily::Greville),
            _ => Err(invalid(format!("unknown test family {s:?}"))),
        }
    }
}

impl fmt::Display for TestFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestFamily::EqualWidth => "equal-width",
            TestFamily::Greville => "greville",
        })
    }
}

/// Refined test space, the summation sets for all of its rows, and the rows
/// kept for a square system.
#[derive(Debug, Clone)]
pub struct RowSummationPlan {
    refined: BasisSpec,
    k: usize,
    sets: Vec<(usize, usize)>,
    rows: Vec<usize>,
}

impl RowSummationPlan {
    pub fn refined_spec(&self) -> &BasisSpec {
        &self.refined
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Inclusive index range summed into row `r`, for every refined row.
    pub fn sets(&self) -> &[(usize, usize)] {
        &self.sets
    }

    /// Refined rows kept for the square system.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Sets of the kept rows, in order.
    pub fn selected_sets(&self) -> Vec<(usize, usize)> {
        self.rows.iter().map(|&r| self.sets[r]).collect()
    }
}

/// Summation plan over a test space refined `refine_factor` times, summing
/// rows `r - k ..= r + k` (clipped).
pub fn summation_plan(trial: &BasisSpec, refine_factor: usize, k: usize) -> Result<RowSummationPlan> {
    if refine_factor < 1 {
        return Err(invalid("refine factor must be at least 1"));
    }
    let (a, b) = trial.domain();
    let breaks = trial.breaks();
    let h0 = breaks[1] - breaks[0];
    if breaks.windows(2).any(|w| ((w[1] - w[0]) - h0).abs() > 1e-12 * (b - a)) {
        return Err(invalid("row summation needs a uniform trial mesh"));
    }
    let refined = make_uniform_clamped(a, b, refine_factor * trial.num_elements(), trial.degree())?;
    let ns = refined.num_basis();
    let sets = (0..ns).map(|r| (r.saturating_sub(k), (r + k).min(ns - 1))).collect();
    let n = trial.num_basis();
    let rows = if n == 1 {
        vec![(ns - 1) / 2]
    } else {
        (0..n)
            .map(|i| ((i * (ns - 1)) as f64 / (n - 1) as f64).round() as usize)
            .collect()
    };
    Ok(RowSummationPlan { refined, k, sets, rows })
}

/// Value at `x` of the sum of refined B-splines in set `set_index`.
pub fn eval_summed_test(plan: &RowSummationPlan, set_index: usize, x: f64) -> Result<f64> {
    let &(lo, hi) = plan
        .sets
        .get(set_index)
        .ok_or(Error::IndexOutOfRange { index: set_index, len: plan.sets.len() })?;
    let (first, vals) = plan.refined.eval_nonzero(x)?;
    Ok(vals
        .iter()
        .enumerate()
        .filter(|(j, _)| (lo..=hi).contains(&(first + j)))
        .map(|(_, v)| v)
        .sum())
}

/// Region where a summed set equals one, or `None` if it never does.
pub fn plateau(refined: &BasisSpec, set: (usize, usize)) -> Option<(f64, f64)> {
    let p = refined.degree();
    let (lo, hi) = set;
    if hi < lo + p {
        return None;
    }
    let t = refined.knots().values();
    Some((t[lo + p], t[hi + 1]))
}

/// Indicator set formed by the plateaus of the kept rows.
pub fn plateau_test_set(trial: &BasisSpec, plan: &RowSummationPlan) -> Result<PwcTestSet> {
    let intervals = plan
        .selected_sets()
        .into_iter()
        .map(|s| plateau(&plan.refined, s).ok_or_else(|| invalid(format!("set {s:?} has no plateau"))))
        .collect::<Result<Vec<_>>>()?;
    let r = plan.refined.num_elements() / trial.num_elements();
    PwcTestSet::new(intervals, r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellPosedness {
    pub min_abs_pivot: f64,
    pub ok: bool,
}

/// LU pivot check of a square system.
pub fn wellposedness_report(m: &DenseMatrix) -> WellPosedness {
    let pivots = lu_pivots(m);
    let scale = m.max_abs();
    let min_abs_pivot = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    let ok = !pivots.is_empty() && pivots.iter().all(|&p| p > 1e-12 * scale);
    WellPosedness { min_abs_pivot, ok }
}
