//! Scalar functionals of a perturbation built on the spectral shift function.
//!
//! With `A0` fixed and a weight `f`,
//!
//! ```text
//! g(V)      = ∫ f(λ) ξ(λ; A0 + V, A0) dλ
//! G(α)      = ∫_0^α tr[f(A0 + sV) V] ds
//! g_a(α)    = ∫ f(λ) (λ + a)^{-(q+1)} ξ(λ; A0 + V(α), A0) dλ
//! ```
//!
//! `g(αV) = G(α)` for nonnegative nonincreasing `f`; the two sides are
//! computed by unrelated routes (exact step integration against quadrature of
//! the coupling trace).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{apply_function, eigendecompose, eigenvalues, resolvent_power, CouplingFamily, HermitianOperator, Spectrum};
use crate::quadrature;
use crate::ssf::{integrate_step_against, ssf, ssf_from_spectra, StepFunction};
use crate::tolerance;
use crate::weights::{resolvent_weight, TraceTestFunction, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Absolute tolerance per interval for adaptive quadrature.
    pub abs_tol: f64,
    /// Bisection depth limit.
    pub max_depth: u32,
    /// Grid size used to locate discontinuities of the coupling trace.
    pub coupling_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_depth: 40, coupling_nodes: 257 }
    }
}

/// `A0`, the weight `f` and quadrature settings.
#[derive(Clone, Debug)]
pub struct FunctionalContext {
    a0: HermitianOperator,
    spec_a0: Spectrum,
    weight: Weight,
    pub quadrature: QuadratureConfig,
}

impl FunctionalContext {
    pub fn new(a0: HermitianOperator, weight: Weight) -> Self {
        Self::with_quadrature(a0, weight, QuadratureConfig::default())
    }

    pub fn with_quadrature(a0: HermitianOperator, weight: Weight, quadrature: QuadratureConfig) -> Self {
        let spec_a0 = eigenvalues(&a0);
        Self { a0, spec_a0, weight, quadrature }
    }

    pub fn a0(&self) -> &HermitianOperator {
        &self.a0
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    /// Same `A0`, different weight.
    pub fn with_weight(&self, weight: Weight) -> Self {
        Self { weight, ..self.clone() }
    }

    /// `ξ(·; A0 + V, A0)`.
    pub fn ssf_of(&self, v: &HermitianOperator) -> Result<StepFunction> {
        self.a0.check_same_dim(v)?;
        ssf_from_spectra(&eigenvalues(&(&self.a0 + v)), &self.spec_a0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_bound: f64,
}

/// Sampled curve `α ↦ value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingCurve {
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
}

impl CouplingCurve {
    pub fn new(alphas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if alphas.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: alphas.len(), got: values.len() });
        }
        if alphas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::OutOfRange { name: "alphas", detail: "must be ascending".into() });
        }
        Ok(Self { alphas, values })
    }

    /// `alpha,value` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,value\n");
        for (a, v) in self.alphas.iter().zip(&self.values) {
            out.push_str(&format!("{a:?},{v:?}\n"));
        }
        out
    }
}

/// `g(V) = ∫ f ξ(·; A0 + V, A0)`.
pub fn g_functional(ctx: &FunctionalContext, v: &HermitianOperator) -> Result<f64> {
    integrate_step_against(&ctx.ssf_of(v)?, &ctx.weight)
}

/// Both sides of the trace formula and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFormulaSides {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `|tr(F(A0 + V) − F(A0)) − ∫ F' ξ|`, with `∫ F'` on each interval of ξ by
/// adaptive Gauss–Legendre.
pub fn trace_formula_residual(a0: &HermitianOperator, f: &TraceTestFunction, v: &HermitianOperator) -> Result<TraceFormulaSides> {
    let a = a0.try_add(v)?;
    let lhs = apply_function(&a, |x| f.value(x))?.trace() - apply_function(a0, |x| f.value(x))?.trace();
    let xi = ssf(&a, a0)?;
    let mut rhs = 0.0;
    for (lo, hi, val) in xi.intervals() {
        let est = quadrature::adaptive(|x| Ok(f.derivative(x)), lo, hi, 1e-13, 40)?;
        rhs += val * est.value;
    }
    Ok(TraceFormulaSides { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// `tr[f(A0 + sV) V]`.
pub fn coupling_trace(ctx: &FunctionalContext, v: &HermitianOperator, s: f64) -> Result<f64> {
    ctx.a0.check_same_dim(v)?;
    let decomp = eigendecompose(&(&ctx.a0 + &v.scale(s)))?;
    let diag = decomp.diagonal_elements(v);
    let mut re = 0.0;
    let mut im = 0.0;
    let mut mag = 0.0;
    for (&l, d) in decomp.eigenvalues.values().iter().zip(&diag) {
        let fl = ctx.weight.eval(l)?;
        re += fl * d.re;
        im += fl * d.im;
        mag += (fl * d.norm()).abs();
    }
    if im.abs() > tolerance::IMAGINARY * (1.0 + mag) {
        return Err(Error::Numerical(format!("trace has imaginary part {im:e} (magnitude {mag:e})")));
    }
    Ok(re)
}

/// Number of eigenvalues of `A0 + sV` at or below each singular point of `f`.
fn crossing_counts(ctx: &FunctionalContext, v: &HermitianOperator, points: &[f64], s: f64) -> Vec<usize> {
    let spec = eigenvalues(&(&ctx.a0 + &v.scale(s)));
    points.iter().map(|&p| spec.values().partition_point(|&x| x <= p)).collect()
}

/// Locations in `[lo, hi]` where an eigenvalue of `A0 + sV` crosses a jump or
/// kink of `f`.
fn coupling_breaks(ctx: &FunctionalContext, v: &HermitianOperator, lo: f64, hi: f64) -> Vec<f64> {
    let points = ctx.weight.singular_points();
    if points.is_empty() {
        return Vec::new();
    }
    let n = ctx.quadrature.coupling_nodes.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let min_width = 1e-14 * (1.0 + lo.abs().max(hi.abs()));
    let mut breaks = Vec::new();
    let mut prev_s = lo;
    let mut prev = crossing_counts(ctx, v, &points, lo);
    for k in 1..n {
        let s = if k + 1 == n { hi } else { lo + h * k as f64 };
        let cur = crossing_counts(ctx, v, &points, s);
        if cur != prev {
            bisect_breaks(ctx, v, &points, (prev_s, &prev), (s, &cur), min_width, &mut breaks);
        }
        prev_s = s;
        prev = cur;
    }
    breaks
}

fn bisect_breaks(
    ctx: &FunctionalContext,
    v: &HermitianOperator,
    points: &[f64],
    (a, ca): (f64, &[usize]),
    (b, cb): (f64, &[usize]),
    min_width: f64,
    out: &mut Vec<f64>,
) {
    if ca == cb {
        return;
    }
    let mid = 0.5 * (a + b);
    if b - a <= min_width || mid <= a || mid >= b {
        out.push(mid);
        return;
    }
    let cm = crossing_counts(ctx, v, points, mid);
    bisect_breaks(ctx, v, points, (a, ca), (mid, &cm), min_width, out);
    bisect_breaks(ctx, v, points, (mid, &cm), (b, cb), min_width, out);
}

/// `G(α) = ∫_0^α tr[f(A0 + sV) V] ds`.
///
/// The integrand is piecewise analytic with jumps where an eigenvalue of
/// `A0 + sV` crosses a threshold of `f`. Those points are located on a grid
/// of `coupling_nodes` samples refined by bisection; each smooth piece is
/// integrated by composite Gauss–Legendre with panel doubling until
/// successive estimates agree to `1e-8 (1 + |estimate|)`, falling back to
/// adaptive bisection for pieces that do not settle.
pub fn birman_solomyak_rhs(ctx: &FunctionalContext, v: &HermitianOperator, alpha: f64) -> Result<QuadratureEstimate> {
    ctx.a0.check_same_dim(v)?;
    if alpha == 0.0 {
        return Ok(QuadratureEstimate { value: 0.0, error_bound: 0.0 });
    }
    let (lo, hi, sign) = if alpha > 0.0 { (0.0, alpha, 1.0) } else { (alpha, 0.0, -1.0) };
    let mut cuts = vec![lo];
    cuts.extend(coupling_breaks(ctx, v, lo, hi));
    cuts.push(hi);
    let integrand = |s: f64| coupling_trace(ctx, v, s);
    let mut value = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let est = match quadrature::doubling(integrand, a, b, 1, 1e-8, 8) {
            Ok(e) => e,
            Err(Error::QuadratureNonConvergence { .. }) => {
                quadrature::adaptive(integrand, a, b, ctx.quadrature.abs_tol, ctx.quadrature.max_depth)?
            }
            Err(e) => return Err(e),
        };
        value += est.value;
        error += est.error;
    }
    Ok(QuadratureEstimate { value: sign * value, error_bound: error })
}

/// `g_a(α)` by direct integration of `f (λ + a)^{-(q+1)}` against ξ.
pub fn g_a_weighted(ctx: &FunctionalContext, family: &CouplingFamily, alpha: f64, shift: f64, q: u32) -> Result<f64> {
    check_shift(family, shift)?;
    let v = family.member(alpha)?;
    let w = resolvent_weight(&ctx.weight, shift, q + 1)?;
    let xi = ssf(&(family.base() + &v), family.base())?;
    integrate_step_against(&xi, &w)
}

/// `g_a(α)` through the substitution `t = (λ + a)^{-1}`:
/// `-∫_0^∞ f((1 − a t)/t) t^{q−1} ξ(t; (A + a)^{-1}, (A0 + a)^{-1}) dt`.
pub fn g_a_substituted(ctx: &FunctionalContext, family: &CouplingFamily, alpha: f64, shift: f64, q: u32) -> Result<f64> {
    check_shift(family, shift)?;
    let v = family.member(alpha)?;
    let a = family.base() + &v;
    let r = resolvent_power(&a, shift, 1.0)?;
    let r0 = resolvent_power(family.base(), shift, 1.0)?;
    let xi_t = ssf(&r, &r0)?;
    let splits: Vec<f64> = ctx
        .weight
        .singular_points()
        .into_iter()
        .filter(|&s| s + shift > 0.0)
        .map(|s| 1.0 / (s + shift))
        .collect();
    let f = &ctx.weight;
    let integrand = |t: f64| -> Result<f64> { Ok(f.eval(1.0 / t - shift)? * t.powi(q as i32 - 1)) };
    let mut acc = 0.0;
    for (lo, hi, val) in xi_t.intervals() {
        let est = quadrature::adaptive_split(integrand, lo, hi, &splits, 1e-14, 40)?;
        acc += val * est.value;
    }
    Ok(-acc)
}

fn check_shift(family: &CouplingFamily, shift: f64) -> Result<()> {
    let floor = family.shift_floor()?;
    if shift < floor * (1.0 - 1e-12) {
        return Err(Error::ShiftTooSmall { shift, min_spectrum: 1.0 - floor });
    }
    Ok(())
}

/// Ratios `g(αV)/α` along a geometric grid and the resulting estimate of
/// `γ = lim g(αV)/α`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongCoupling {
    pub curve: CouplingCurve,
    pub gamma: f64,
    /// Largest increase of the ratio between consecutive grid points.
    pub worst_increase: f64,
    /// True when no increase exceeds `1e-9 * (1 + max|ratio|)`.
    pub monotone: bool,
}

/// Grid `alpha_max / 2^(points−1), …, alpha_max / 2, alpha_max`.
pub fn strong_coupling_gamma(ctx: &FunctionalContext, v: &HermitianOperator, alpha_max: f64, points: usize) -> Result<StrongCoupling> {
    if !(alpha_max > 0.0) || points < 2 {
        return Err(Error::OutOfRange { name: "alpha grid", detail: format!("alpha_max {alpha_max}, points {points}") });
    }
    let alphas: Vec<f64> = (0..points).map(|k| alpha_max / 2f64.powi((points - 1 - k) as i32)).collect();
    let mut ratios = Vec::with_capacity(points);
    for &alpha in &alphas {
        ratios.push(g_functional(ctx, &v.scale(alpha))? / alpha);
    }
    let scale = 1.0 + ratios.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
    let worst_increase = ratios.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    let gamma = *ratios.last().expect("at least two points");
    Ok(StrongCoupling {
        monotone: worst_increase <= 1e-9 * scale,
        worst_increase,
        gamma,
        curve: CouplingCurve::new(alphas, ratios)?,
    })
}

/// `G` sampled at the given coupling constants.
pub fn coupling_curve(ctx: &FunctionalContext, v: &HermitianOperator, alphas: &[f64]) -> Result<CouplingCurve> {
    let mut values = Vec::with_capacity(alphas.len());
    for &a in alphas {
        values.push(birman_solomyak_rhs(ctx, v, a)?.value);
    }
    CouplingCurve::new(alphas.to_vec(), values)
}
