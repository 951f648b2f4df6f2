//! Checks of identities and auxiliary inequalities used by the main
//! statements.

use serde_json::json;

use super::{require, three_point_nodes, PropertyReport, Worst};
use crate::error::{Error, Result};
use crate::functionals::{birman_solomyak_rhs, strong_coupling_gamma, trace_formula_residual, FunctionalContext};
use crate::operator::{apply_function, eigenvalues, psd_gap, HermitianOperator};
use crate::ssf::{eigenvalue_sum, integrated_ssf, ssf, Sign};
use crate::tolerance;
use crate::weights::TraceTestFunction;

/// `∫ξ(·; A0+V, A0) = tr V`.
pub fn check_trace_identity(a0: &HermitianOperator, v: &HermitianOperator) -> Result<PropertyReport> {
    let xi = ssf(&a0.try_add(v)?, a0)?;
    let (integral, tr) = (xi.integral(), v.trace());
    let mut worst = Worst::identity(tolerance::relative(tolerance::EXACT, tr));
    worst.observe(integral - tr, || json!({ "integral": integral, "trace": tr }));
    Ok(worst.finish("trace_identity", json!({ "a0": a0, "v": v })))
}

/// `tr(F(A0+V) − F(A0)) = ∫F'ξ` within `1e-8 (1 + |LHS|)` for each `F`.
pub fn check_krein_trace(a0: &HermitianOperator, v: &HermitianOperator, fs: &[TraceTestFunction]) -> Result<PropertyReport> {
    let rows = fs.iter().map(|f| Ok((f, trace_formula_residual(a0, f, v)?))).collect::<Result<Vec<_>>>()?;
    let tol_of = |lhs: f64| tolerance::relative(tolerance::ONE_SIDED, lhs);
    let report_tol = rows.iter().map(|(_, s)| tol_of(s.lhs)).fold(tol_of(0.0), f64::max);
    let mut worst = Worst::identity(report_tol);
    for (f, sides) in rows {
        worst.observe_scaled(sides.lhs - sides.rhs, tol_of(sides.lhs), || json!({ "function": f.label(), "lhs": sides.lhs, "rhs": sides.rhs }));
    }
    Ok(worst.finish("krein_trace", json!({ "a0": a0, "v": v, "functions": fs })))
}

/// With `λ₊ = max spec V + margin`, `ζ^-(λ; λ₊I+V, λ₊I) = S^-_{λ−λ₊}(V)` for
/// `λ = λ₊ + μ`, `μ < 0`; mirrored with `λ₋ = min spec V − margin`, `ζ^+` and
/// `S^+` for `μ > 0`. Offsets `μ` of the wrong sign are skipped.
pub fn check_sum_reduction(v: &HermitianOperator, offsets: &[f64], margin: f64) -> Result<PropertyReport> {
    if !(margin > 0.0) {
        return Err(Error::OutOfRange { name: "margin", detail: format!("{margin} must be positive") });
    }
    let spec = eigenvalues(v);
    let n = v.dim();
    let scale: f64 = spec.values().iter().map(|x| x.abs()).sum::<f64>() + offsets.iter().fold(0.0_f64, |m, x| m.max(x.abs())) * n as f64;
    let mut worst = Worst::identity(tolerance::relative(tolerance::EXACT, scale));
    let upper = spec.max() + margin;
    let xi_minus = ssf(&(&HermitianOperator::scalar(n, upper) + v), &HermitianOperator::scalar(n, upper))?;
    let lower = spec.min() - margin;
    let xi_plus = ssf(&(&HermitianOperator::scalar(n, lower) + v), &HermitianOperator::scalar(n, lower))?;
    for &mu in offsets {
        if mu < 0.0 {
            let zeta = integrated_ssf(&xi_minus, upper + mu, Sign::Minus);
            let sum = eigenvalue_sum(&spec, mu, Sign::Minus);
            worst.observe(zeta - sum, || json!({ "side": "minus", "lambda_plus": upper, "offset": mu, "zeta": zeta, "sum": sum }));
        } else if mu > 0.0 {
            let zeta = integrated_ssf(&xi_plus, lower + mu, Sign::Plus);
            let sum = eigenvalue_sum(&spec, mu, Sign::Plus);
            worst.observe(zeta - sum, || json!({ "side": "plus", "lambda_minus": lower, "offset": mu, "zeta": zeta, "sum": sum }));
        }
    }
    Ok(worst.finish("sum_reduction", json!({ "v": v, "offsets": offsets, "margin": margin })))
}

fn inverse(x: &HermitianOperator) -> Result<HermitianOperator> {
    let min = eigenvalues(x).min();
    if !(min > 0.0) {
        return Err(Error::InvalidMatrix(format!("not positive definite (min eigenvalue {min:e})")));
    }
    apply_function(x, |l| 1.0 / l)
}

/// `psd_gap(βX^{-1} + (1−β)Y^{-1} − (βX + (1−β)Y)^{-1}) ≥ 0`.
pub fn check_inverse_convexity(x: &HermitianOperator, y: &HermitianOperator, betas: &[f64]) -> Result<PropertyReport> {
    x.check_same_dim(y)?;
    let (xi, yi) = (inverse(x)?, inverse(y)?);
    let mut rows = Vec::with_capacity(betas.len());
    let mut scale = xi.max_abs().max(yi.max_abs());
    for &b in betas {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::OutOfRange { name: "beta", detail: format!("{b} outside [0, 1]") });
        }
        let mixed_inv = inverse(&(&x.scale(b) + &y.scale(1.0 - b)))?;
        let diff = &(&xi.scale(b) + &yi.scale(1.0 - b)) - &mixed_inv;
        scale = scale.max(mixed_inv.max_abs());
        rows.push((b, psd_gap(&diff)));
    }
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::EXACT, scale));
    for (b, gap) in rows {
        worst.observe(gap, || json!({ "beta": b, "min_eigenvalue": gap }));
    }
    Ok(worst.finish("inverse_convexity", json!({ "x": x, "y": y, "betas": betas })))
}

/// `g(αV)/α` nonincreasing along `α = alpha_max / 2^k` within `1e-9 scale`
/// and the last two ratios within `1e-3 (1 + scale)`, for `V ⪰ 0`.
pub fn check_strong_coupling(ctx: &FunctionalContext, v: &HermitianOperator, alpha_max: f64, points: usize) -> Result<PropertyReport> {
    let gap = psd_gap(v);
    if gap < -v.psd_tolerance() {
        return Err(Error::InvalidMatrix(format!("perturbation is not positive semidefinite (min eigenvalue {gap:e})")));
    }
    require(ctx.weight().is_nonincreasing(), "the coupling ratio requires a nonincreasing weight")?;
    let sc = strong_coupling_gamma(ctx, v, alpha_max, points)?;
    let r = &sc.curve.values;
    let scale = r.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mono_tol = 1e-9 * (1.0 + scale);
    let mut worst = Worst::one_sided(mono_tol);
    for k in 1..r.len() {
        worst.observe(r[k - 1] - r[k], || json!({ "condition": "monotone", "alphas": [sc.curve.alphas[k - 1], sc.curve.alphas[k]], "ratios": [r[k - 1], r[k]] }));
    }
    let n = r.len();
    worst.observe_scaled(-(r[n - 1] - r[n - 2]).abs(), tolerance::relative(1e-3, scale), || {
        json!({ "condition": "tail", "ratios": [r[n - 2], r[n - 1]] })
    });
    Ok(worst.finish("strong_coupling", json!({ "a0": ctx.a0(), "v": v, "weight": ctx.weight(), "alpha_max": alpha_max, "points": points, "gamma": sc.gamma })))
}

/// `2G(α) − G(α+h) − G(α−h) ≥ 0` for the coupling integral `G`.
pub fn check_coupling_concavity(ctx: &FunctionalContext, v: &HermitianOperator, alphas: &[f64]) -> Result<PropertyReport> {
    require(ctx.weight().is_nonincreasing(), "coupling-integral concavity requires a nonincreasing weight")?;
    let lo = alphas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut samples = Vec::new();
    let mut bound = 0.0;
    for (alpha, h) in three_point_nodes(alphas, lo, hi) {
        let e = [birman_solomyak_rhs(ctx, v, alpha - h)?, birman_solomyak_rhs(ctx, v, alpha)?, birman_solomyak_rhs(ctx, v, alpha + h)?];
        bound = e.iter().map(|x| x.error_bound).fold(bound, f64::max);
        samples.push((alpha, h, e.map(|x| x.value)));
    }
    let mut worst = Worst::one_sided(tolerance::QUADRATURE_FLOOR.max(4.0 * bound));
    for (alpha, h, [gm, g0, gp]) in samples {
        worst.observe(2.0 * g0 - gm - gp, || json!({ "alpha": alpha, "h": h, "values": [gm, g0, gp] }));
    }
    Ok(worst.finish("coupling_concavity", json!({ "a0": ctx.a0(), "v": v, "weight": ctx.weight() })))
}
