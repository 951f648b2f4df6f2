//! Gauss–Legendre quadrature: fixed rules, adaptive bisection and composite
//! rules with panel doubling.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule, exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-like initial guess, then Newton on P_n
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Shared 8-point rule.
    pub fn default_rule() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(8))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }

    /// Composite rule over `panels` equal panels.
    pub fn composite<F>(&self, mut f: F, a: f64, b: f64, panels: usize) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let h = (b - a) / panels as f64;
        let mut acc = 0.0;
        for k in 0..panels {
            let lo = a + h * k as f64;
            let hi = if k + 1 == panels { b } else { lo + h };
            acc += self.integrate(&mut f, lo, hi)?;
        }
        Ok(acc)
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Value plus an error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate { value: self.value + rhs.value, error: self.error + rhs.error }
    }
}

/// Adaptive bisection: a panel is accepted when the rule on the panel and the
/// sum over its two halves agree to `abs_tol`; otherwise both halves recurse.
pub fn adaptive<F>(mut f: F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let rule = GaussLegendre::default_rule();
    let whole = rule.integrate(&mut f, a, b)?;
    adaptive_step(rule, &mut f, a, b, whole, abs_tol, max_depth)
}

fn adaptive_step<F>(rule: &GaussLegendre, f: &mut F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mid = 0.5 * (a + b);
    let left = rule.integrate(&mut *f, a, mid)?;
    let right = rule.integrate(&mut *f, mid, b)?;
    let refined = left + right;
    let diff = (refined - whole).abs();
    if diff <= tol || mid <= a || mid >= b {
        return Ok(Estimate { value: refined, error: diff });
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence { previous: whole, last: refined });
    }
    let l = adaptive_step(rule, f, a, mid, left, tol, depth - 1)?;
    let r = adaptive_step(rule, f, mid, b, right, tol, depth - 1)?;
    Ok(l + r)
}

/// Adaptive integration over `[a, b]` split at the given interior points.
pub fn adaptive_split<F>(mut f: F, a: f64, b: f64, splits: &[f64], abs_tol: f64, max_depth: u32) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut points: Vec<f64> = splits.iter().copied().filter(|&s| s > a && s < b).collect();
    points.sort_by(f64::total_cmp);
    let mut total = Estimate { value: 0.0, error: 0.0 };
    let mut lo = a;
    for hi in points.into_iter().chain(std::iter::once(b)) {
        total = total + adaptive(&mut f, lo, hi, abs_tol, max_depth)?;
        lo = hi;
    }
    Ok(total)
}

/// Composite rule starting from `panels` panels and doubling the panel count
/// until successive estimates differ by at most `rel_tol * (1 + |estimate|)`.
pub fn doubling<F>(mut f: F, a: f64, b: f64, panels: usize, rel_tol: f64, max_doublings: u32) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let rule = GaussLegendre::default_rule();
    let mut n = panels.max(1);
    let mut prev = rule.composite(&mut f, a, b, n)?;
    for _ in 0..max_doublings {
        n *= 2;
        let next = rule.composite(&mut f, a, b, n)?;
        let diff = (next - prev).abs();
        if diff <= rel_tol * (1.0 + next.abs()) {
            return Ok(Estimate { value: next, error: diff });
        }
        prev = next;
    }
    let last = rule.composite(&mut f, a, b, n * 2)?;
    Err(Error::QuadratureNonConvergence { previous: prev, last })
}
