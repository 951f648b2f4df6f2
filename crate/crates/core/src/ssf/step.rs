use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

/// Right-continuous, compactly supported piecewise-constant function.
///
/// `values[k]` is the value on `[breakpoints[k], breakpoints[k + 1])`; the
/// function vanishes outside `[breakpoints[0], breakpoints[m - 1])`. The
/// representation is canonical: breakpoints closer than
/// `1e-12 * (1 + max|b|)` are merged and no breakpoint separates equal values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawStep {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        StepFunction::new(raw.breakpoints, raw.values)
    }
}

fn merge_tolerance(points: &[f64]) -> f64 {
    let max = points.iter().fold(0.0_f64, |m, p| m.max(p.abs()));
    tolerance::MERGE * (1.0 + max)
}

impl StepFunction {
    pub fn zero() -> Self {
        Self { breakpoints: Vec::new(), values: Vec::new() }
    }

    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() && values.is_empty() {
            return Ok(Self::zero());
        }
        if values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        if breakpoints.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidStepFunction("non-finite breakpoint or value".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStepFunction("breakpoints must be strictly increasing".into()));
        }
        Ok(Self::canonical(&breakpoints, &values))
    }

    /// Indicator-like constructor: `value` on `[lo, hi)`.
    pub fn interval(lo: f64, hi: f64, value: f64) -> Result<Self> {
        Self::new(vec![lo, hi], vec![value])
    }

    /// Builds the function from integer jumps at the given positions.
    /// The jumps must sum to zero.
    pub fn from_jumps(mut events: Vec<(f64, i64)>) -> Result<Self> {
        if events.iter().any(|(p, _)| !p.is_finite()) {
            return Err(Error::InvalidStepFunction("non-finite jump position".into()));
        }
        if events.iter().map(|e| e.1).sum::<i64>() != 0 {
            return Err(Error::InvalidStepFunction("jumps do not sum to zero".into()));
        }
        events.sort_by(|a, b| a.0.total_cmp(&b.0));
        let points: Vec<f64> = events.iter().map(|e| e.0).collect();
        let tol = merge_tolerance(&points);
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        let mut level = 0_i64;
        let mut i = 0;
        while i < events.len() {
            let start = events[i].0;
            let mut last = start;
            let mut jump = 0;
            while i < events.len() && events[i].0 - last < tol {
                last = events[i].0;
                jump += events[i].1;
                i += 1;
            }
            if jump != 0 {
                level += jump;
                breakpoints.push(start);
                values.push(level as f64);
            }
        }
        values.pop();
        Ok(Self { breakpoints, values })
    }

    fn canonical(b: &[f64], v: &[f64]) -> Self {
        let tol = merge_tolerance(b);
        // (position, value to the right) per merged cluster
        let mut clusters: Vec<(f64, f64)> = Vec::with_capacity(b.len());
        let mut last = f64::NEG_INFINITY;
        for (k, &p) in b.iter().enumerate() {
            let after = v.get(k).copied().unwrap_or(0.0);
            match clusters.last_mut() {
                Some(c) if p - last < tol => c.1 = after,
                _ => clusters.push((p, after)),
            }
            last = p;
        }
        let mut breakpoints = Vec::with_capacity(clusters.len());
        let mut values = Vec::with_capacity(clusters.len());
        let mut before = 0.0;
        for (p, after) in clusters {
            if after != before {
                breakpoints.push(p);
                values.push(after);
                before = after;
            }
        }
        values.pop();
        Self { breakpoints, values }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `[min, max)` of the support, if nonzero.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((*self.breakpoints.first()?, *self.breakpoints.last()?))
    }

    /// `(lo, hi, value)` for every interval of constancy inside the support.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b <= lambda);
        if k == 0 || k >= self.breakpoints.len() {
            0.0
        } else {
            self.values[k - 1]
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn integral(&self) -> f64 {
        self.intervals().map(|(lo, hi, v)| v * (hi - lo)).fold(0.0, |acc, x| acc + x)
    }

    /// `∫_{-∞}^{λ}`; `λ` may be infinite.
    pub fn integral_below(&self, lambda: f64) -> f64 {
        self.intervals()
            .map(|(lo, hi, v)| {
                let w = hi.min(lambda) - lo;
                if w > 0.0 {
                    v * w
                } else {
                    0.0
                }
            })
            .fold(0.0, |acc, x| acc + x)
    }

    /// `∫_{λ}^{∞}`; `λ` may be infinite.
    pub fn integral_above(&self, lambda: f64) -> f64 {
        self.intervals()
            .map(|(lo, hi, v)| {
                let w = hi - lo.max(lambda);
                if w > 0.0 {
                    v * w
                } else {
                    0.0
                }
            })
            .fold(0.0, |acc, x| acc + x)
    }

    /// Pointwise combination over the merged breakpoint set.
    pub fn combine<F: Fn(f64, f64) -> f64>(&self, other: &Self, op: F) -> Self {
        let mut points: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        let values: Vec<f64> = points.windows(2).map(|w| op(self.eval(w[0]), other.eval(w[0]))).collect();
        if points.len() < 2 {
            return Self::zero();
        }
        Self::canonical(&points, &values)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        let values: Vec<f64> = self.values.iter().map(|v| v * c).collect();
        Self::canonical(&self.breakpoints, &values)
    }

    /// Midpoints of all intervals of the merged breakpoint set of `self` and
    /// `other`.
    pub fn merged_midpoints(&self, other: &Self) -> Vec<f64> {
        let mut points: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        points.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

/// `∫_lo^hi |λ|^k dλ` in closed form.
pub fn abs_monomial_integral(lo: f64, hi: f64, k: u32) -> f64 {
    let kp = (k + 1) as f64;
    let prim = |x: f64| x.abs().powi(k as i32 + 1) / kp;
    if lo >= 0.0 {
        prim(hi) - prim(lo)
    } else if hi <= 0.0 {
        prim(lo) - prim(hi)
    } else {
        prim(lo) + prim(hi)
    }
}
