//! Executable checks of the concavity, monotonicity and identity statements.
//!
//! Every check evaluates one generated instance and returns a
//! [`PropertyReport`] holding the worst gap it saw. One-sided statements
//! (`x ≥ 0`) pass when `worst_gap ≥ -tolerance`; identities pass when
//! `|worst_gap| ≤ tolerance`. When a check combines conditions with different
//! tolerances, each gap is rescaled to the report tolerance before the
//! minimum is taken, and the witness records the raw values.

mod identities;

pub use identities::{
    check_coupling_concavity, check_inverse_convexity, check_krein_trace, check_strong_coupling, check_sum_reduction,
    check_trace_identity,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functionals::{
    birman_solomyak_rhs, coupling_trace, g_a_weighted, g_functional, FunctionalContext,
};
use crate::operator::{compress_by_projection, eigenvalues, psd_gap, resolvent_power, trace_norm_diff, CouplingFamily, HermitianOperator};
use crate::ssf::{l1_distance, ssf, ssf_via_invariance};
use crate::tolerance;
use crate::weights::{q_of, Weight};

/// Property tags with the statement each one exercises.
pub const PROPERTIES: [(&str, &str); 13] = [
    ("th1_concavity", "g(V) = ∫ f ξ(·; A0+V, A0) concave in V for nonincreasing f"),
    ("cor1_convexity", "g(V) convex in V for nondecreasing f"),
    ("cor2_operator_family", "α ↦ g(V(α)) concave along operator-concave families, f ≥ 0 nonincreasing"),
    ("bs_identity", "g(αV) = ∫_0^α tr[f(A0+sV)V] ds"),
    ("bs_monotone", "s ↦ tr[f(A0+sV)V] nonincreasing for nonincreasing f"),
    ("invariance", "invariance principle under λ ↦ (λ+a)^(-p)"),
    ("weighted_concavity", "g_a(α) = ∫ f (λ+a)^(-(q+1)) ξ(·; A(α), A0) concave in α"),
    ("weight_limit", "dominated convergence: a^(q+1) g_a(α) → g(αV)"),
    ("projection_convergence", "ξ of compressions P_n W P_n converges in weighted L¹"),
    ("subadditivity", "g(α1V) + g(α2V) ≥ g((α1+α2)V): subadditivity in the coupling constant"),
    ("ssf_monotone", "monotonicity of the spectral shift function in V"),
    ("chain_rule", "chain rule ξ(A1+W,A1) = ξ(A1+W,A0) + ξ(A0,A1)"),
    ("trace_norm_bound", "∫|ξ|(λ+a)^(-2) ≤ ‖(A+a)^(-1) − (A0+a)^(-1)‖₁"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    OneSided,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: String,
    /// Number of inequalities or identities evaluated.
    pub trials: usize,
    pub worst_gap: f64,
    pub tolerance: f64,
    pub sidedness: Sidedness,
    /// Inputs plus the location of the worst gap.
    pub witness: Value,
    pub pass: bool,
}

impl PropertyReport {
    /// One line with the verdict, the gap and the location of the worst case.
    pub fn summary(&self) -> String {
        format!(
            "{} {}: worst_gap {:e} tolerance {:e} over {} at {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.property,
            self.worst_gap,
            self.tolerance,
            self.trials,
            self.witness.get("worst_at").unwrap_or(&Value::Null)
        )
    }

    pub fn new(property: &str, sidedness: Sidedness, trials: usize, worst_gap: f64, tolerance: f64, witness: Value) -> Self {
        let pass = match sidedness {
            Sidedness::OneSided => worst_gap >= -tolerance,
            Sidedness::Identity => worst_gap.abs() <= tolerance,
        };
        Self { property: property.to_string(), trials, worst_gap, tolerance, sidedness, witness, pass }
    }
}

/// Running worst case of a family of gaps.
pub(crate) struct Worst {
    sidedness: Sidedness,
    tolerance: f64,
    gap: f64,
    at: Value,
    count: usize,
}

impl Worst {
    pub(crate) fn one_sided(tolerance: f64) -> Self {
        Self { sidedness: Sidedness::OneSided, tolerance, gap: 0.0, at: Value::Null, count: 0 }
    }

    pub(crate) fn identity(tolerance: f64) -> Self {
        Self { sidedness: Sidedness::Identity, tolerance, gap: 0.0, at: Value::Null, count: 0 }
    }

    fn worse(&self, gap: f64) -> bool {
        if self.count == 0 || gap.is_nan() {
            return !self.gap.is_nan();
        }
        match self.sidedness {
            Sidedness::OneSided => gap < self.gap,
            Sidedness::Identity => gap.abs() > self.gap.abs(),
        }
    }

    pub(crate) fn observe(&mut self, gap: f64, at: impl FnOnce() -> Value) {
        if self.worse(gap) {
            self.gap = gap;
            self.at = at();
        }
        self.count += 1;
    }

    /// Records a gap whose own tolerance is `tol`, rescaled to the report
    /// tolerance.
    pub(crate) fn observe_scaled(&mut self, gap: f64, tol: f64, at: impl FnOnce() -> Value) {
        let scaled = if tol > 0.0 { gap * self.tolerance / tol } else { gap };
        self.observe(scaled, || {
            let mut v = at();
            if let Value::Object(m) = &mut v {
                m.insert("raw_gap".into(), json!(gap));
                m.insert("condition_tolerance".into(), json!(tol));
            }
            v
        });
    }

    pub(crate) fn finish(self, property: &str, inputs: Value) -> PropertyReport {
        let witness = json!({ "property": property, "inputs": inputs, "worst_at": self.at });
        PropertyReport::new(property, self.sidedness, self.count, self.gap, self.tolerance, witness)
    }
}

pub(crate) fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidWeight(msg.to_string()))
    }
}

/// `uniform` evenly spaced points on `[lo, hi]` plus `random` seeded uniform
/// draws, sorted and deduplicated.
pub fn alpha_grid(lo: f64, hi: f64, uniform: usize, random: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<f64> = match uniform {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 }).collect(),
    };
    out.extend((0..random).map(|_| rng.random_range(lo..=hi)));
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Grid points `α` with step `h` equal to half the distance to the nearest
/// neighbour, kept only when `[α − h, α + h]` lies in `[lo, hi]`.
pub fn three_point_nodes(grid: &[f64], lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    let mut out = Vec::new();
    for k in 0..g.len() {
        let left = if k > 0 { g[k] - g[k - 1] } else { f64::INFINITY };
        let right = if k + 1 < g.len() { g[k + 1] - g[k] } else { f64::INFINITY };
        let h = 0.5 * left.min(right);
        if h.is_finite() && h > 0.0 && g[k] - h >= lo && g[k] + h <= hi {
            out.push((g[k], h));
        }
    }
    out
}

fn mix(v1: &HermitianOperator, v2: &HermitianOperator, alpha: f64) -> Result<HermitianOperator> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange { name: "alpha", detail: format!("{alpha} outside [0, 1]") });
    }
    v1.scale(alpha).try_add(&v2.scale(1.0 - alpha))
}

/// `g(αV1 + (1−α)V2) − αg(V1) − (1−α)g(V2) ≥ 0` over the grid.
pub fn check_concavity_th1(
    a0: &HermitianOperator,
    v1: &HermitianOperator,
    v2: &HermitianOperator,
    f: &Weight,
    alphas: &[f64],
) -> Result<PropertyReport> {
    require(f.is_nonincreasing(), "concavity requires a nonincreasing weight")?;
    let ctx = FunctionalContext::new(a0.clone(), f.clone());
    let g1 = g_functional(&ctx, v1)?;
    let g2 = g_functional(&ctx, v2)?;
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::ONE_SIDED, g1.abs() + g2.abs()));
    for &alpha in alphas {
        let gm = g_functional(&ctx, &mix(v1, v2, alpha)?)?;
        worst.observe(gm - alpha * g1 - (1.0 - alpha) * g2, || json!({ "alpha": alpha, "g_mix": gm }));
    }
    Ok(worst.finish("th1_concavity", json!({ "a0": a0, "v1": v1, "v2": v2, "weight": f, "g_v1": g1, "g_v2": g2 })))
}

/// `αg̃(V1) + (1−α)g̃(V2) − g̃(αV1 + (1−α)V2) ≥ 0` over the grid.
pub fn check_convexity_cor1(
    a0: &HermitianOperator,
    v1: &HermitianOperator,
    v2: &HermitianOperator,
    f: &Weight,
    alphas: &[f64],
) -> Result<PropertyReport> {
    require(f.is_nondecreasing(), "convexity requires a nondecreasing weight")?;
    let ctx = FunctionalContext::new(a0.clone(), f.clone());
    let g1 = g_functional(&ctx, v1)?;
    let g2 = g_functional(&ctx, v2)?;
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::ONE_SIDED, g1.abs() + g2.abs()));
    for &alpha in alphas {
        let gm = g_functional(&ctx, &mix(v1, v2, alpha)?)?;
        worst.observe(alpha * g1 + (1.0 - alpha) * g2 - gm, || json!({ "alpha": alpha, "g_mix": gm }));
    }
    Ok(worst.finish("cor1_convexity", json!({ "a0": a0, "v1": v1, "v2": v2, "weight": f, "g_v1": g1, "g_v2": g2 })))
}

fn three_point_report<F>(property: &str, alphas: &[f64], domain: (f64, f64), inputs: Value, mut eval: F) -> Result<PropertyReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    let nodes = three_point_nodes(alphas, domain.0, domain.1);
    let mut samples = Vec::with_capacity(nodes.len());
    let mut scale = 0.0_f64;
    for &(alpha, h) in &nodes {
        let (gm, g0, gp) = (eval(alpha - h)?, eval(alpha)?, eval(alpha + h)?);
        scale = scale.max(gm.abs()).max(g0.abs()).max(gp.abs());
        samples.push((alpha, h, gm, g0, gp));
    }
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::ONE_SIDED, scale));
    for (alpha, h, gm, g0, gp) in samples {
        worst.observe(2.0 * g0 - gm - gp, || json!({ "alpha": alpha, "h": h, "values": [gm, g0, gp] }));
    }
    Ok(worst.finish(property, inputs))
}

/// Three-point concavity of `α ↦ g(V(α))` along an operator-concave family.
///
/// The weight must be nonnegative as well as nonincreasing: the argument
/// composes concavity with monotonicity of `g` in `V`, and a negative
/// constant weight already makes `g(V(α)) = -c tr V(α)` convex.
pub fn check_operator_family_cor2(family: &CouplingFamily, f: &Weight, alphas: &[f64]) -> Result<PropertyReport> {
    require(f.is_nonincreasing() && f.is_nonnegative(), "operator-family concavity requires a nonnegative nonincreasing weight")?;
    let ctx = FunctionalContext::new(family.base().clone(), f.clone());
    three_point_report("cor2_operator_family", alphas, family.domain(), json!({ "family": family, "weight": f }), |a| {
        g_functional(&ctx, &family.member(a)?)
    })
}

/// `|g(αV) − ∫_0^α tr[f(A0+sV)V] ds| ≤ max(1e-6, quadrature bound)`.
pub fn check_bs_identity(ctx: &FunctionalContext, v: &HermitianOperator, alphas: &[f64]) -> Result<PropertyReport> {
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let lhs = g_functional(ctx, &v.scale(alpha))?;
        let rhs = birman_solomyak_rhs(ctx, v, alpha)?;
        rows.push((alpha, lhs, rhs));
    }
    let tol_of = |bound: f64| tolerance::QUADRATURE_FLOOR.max(bound);
    let report_tol = rows.iter().map(|r| tol_of(r.2.error_bound)).fold(tolerance::QUADRATURE_FLOOR, f64::max);
    let mut worst = Worst::identity(report_tol);
    for (alpha, lhs, rhs) in rows {
        worst.observe_scaled(lhs - rhs.value, tol_of(rhs.error_bound), || {
            json!({ "alpha": alpha, "g": lhs, "coupling_integral": rhs.value, "error_bound": rhs.error_bound })
        });
    }
    Ok(worst.finish("bs_identity", json!({ "a0": ctx.a0(), "v": v, "weight": ctx.weight() })))
}

/// Forward differences of `s ↦ tr[f(A0+sV)V]` on an ascending grid are `≤ 0`.
pub fn check_bs_monotone(ctx: &FunctionalContext, v: &HermitianOperator, s_grid: &[f64]) -> Result<PropertyReport> {
    require(ctx.weight().is_nonincreasing(), "coupling-trace monotonicity requires a nonincreasing weight")?;
    let mut s = s_grid.to_vec();
    s.sort_by(f64::total_cmp);
    let values = s.iter().map(|&x| coupling_trace(ctx, v, x)).collect::<Result<Vec<_>>>()?;
    let scale = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::EXACT, scale));
    for k in 1..values.len() {
        worst.observe(values[k - 1] - values[k], || json!({ "s": [s[k - 1], s[k]], "trace": [values[k - 1], values[k]] }));
    }
    Ok(worst.finish("bs_monotone", json!({ "a0": ctx.a0(), "v": v, "weight": ctx.weight() })))
}

/// `a0 = 1 + max(0, −min spec(A0), −min spec(A0 + V))`.
pub fn pair_shift_floor(a0: &HermitianOperator, v: &HermitianOperator) -> Result<f64> {
    let a = a0.try_add(v)?;
    let min = eigenvalues(a0).min().min(eigenvalues(&a).min());
    Ok(1.0 + (-min).max(0.0))
}

/// L¹ distance between the direct SSF and its reconstruction through the
/// transformed pair, for each exponent `p`.
pub fn check_invariance(a0: &HermitianOperator, v: &HermitianOperator, shift: f64, ps: &[f64]) -> Result<PropertyReport> {
    let a = a0.try_add(v)?;
    let direct = ssf(&a, a0)?;
    let mut worst = Worst::identity(tolerance::ONE_SIDED * (1.0 + a0.dim() as f64));
    for &p in ps {
        let via = ssf_via_invariance(&a, a0, shift, p)?;
        let d = l1_distance(&direct, &via, 0);
        worst.observe(d, || json!({ "p": p, "distance": d }));
    }
    Ok(worst.finish("invariance", json!({ "a0": a0, "v": v, "shift": shift, "ps": ps })))
}

/// Three-point concavity of `α ↦ g_a(α)` for every shift in `shifts`.
pub fn check_weighted_concavity(family: &CouplingFamily, f: &Weight, shifts: &[f64], q: u32, alphas: &[f64]) -> Result<PropertyReport> {
    require(f.is_nonincreasing() && f.is_nonnegative(), "weighted concavity requires a nonnegative nonincreasing weight")?;
    let ctx = FunctionalContext::new(family.base().clone(), f.clone());
    let nodes = three_point_nodes(alphas, family.domain().0, family.domain().1);
    let mut samples = Vec::new();
    let mut scale = 0.0_f64;
    for &a in shifts {
        for &(alpha, h) in &nodes {
            let gm = g_a_weighted(&ctx, family, alpha - h, a, q)?;
            let g0 = g_a_weighted(&ctx, family, alpha, a, q)?;
            let gp = g_a_weighted(&ctx, family, alpha + h, a, q)?;
            scale = scale.max(gm.abs()).max(g0.abs()).max(gp.abs());
            samples.push((a, alpha, h, [gm, g0, gp]));
        }
    }
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::ONE_SIDED, scale));
    for (a, alpha, h, [gm, g0, gp]) in samples {
        worst.observe(2.0 * g0 - gm - gp, || json!({ "shift": a, "alpha": alpha, "h": h, "values": [gm, g0, gp] }));
    }
    Ok(worst.finish("weighted_concavity", json!({ "family": family, "weight": f, "q": q, "shifts": shifts })))
}

/// `a^{q+1} g_a(α) → g(V(α))` along an ascending ladder of shifts: the
/// deviation at the top is at most `1e-3 (1 + |g|)`, and once `a ≥ 4 (1 + ρ)`
/// with `ρ` the spectral radius of the pair, deviations do not grow by more
/// than 10% from one rung to the next.
///
/// Below that point `(1 + λ/a)^{-(q+1)}` weighs the positive and negative
/// parts of `ξ` unevenly enough that the deviation can rise before it decays.
pub fn check_weight_limit(family: &CouplingFamily, f: &Weight, q: u32, alphas: &[f64], shifts: &[f64]) -> Result<PropertyReport> {
    require(f.is_nonincreasing() && f.is_nonnegative(), "the weighted limit requires a nonnegative nonincreasing weight")?;
    if shifts.is_empty() || shifts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange { name: "a ladder", detail: "must be nonempty and strictly ascending".into() });
    }
    let ctx = FunctionalContext::new(family.base().clone(), f.clone());
    let mut rows = Vec::new();
    for &alpha in alphas {
        let v = family.member(alpha)?;
        let g = g_functional(&ctx, &v)?;
        let (sa, s0) = (eigenvalues(&(family.base() + &v)), eigenvalues(family.base()));
        let rho = [sa.min(), sa.max(), s0.min(), s0.max()].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let asymptotic = 4.0 * (1.0 + rho);
        let devs = shifts
            .iter()
            .map(|&a| Ok((a.powi(q as i32 + 1) * g_a_weighted(&ctx, family, alpha, a, q)? - g).abs()))
            .collect::<Result<Vec<_>>>()?;
        rows.push((alpha, g, devs, asymptotic));
    }
    let top_tol = |g: f64| tolerance::relative(1e-3, g);
    let report_tol = rows.iter().map(|r| top_tol(r.1)).fold(top_tol(0.0), f64::max);
    let mut worst = Worst::one_sided(report_tol);
    for (alpha, g, devs, asymptotic) in &rows {
        let top = *devs.last().expect("nonempty ladder");
        worst.observe_scaled(-top, top_tol(*g), || json!({ "alpha": alpha, "g": g, "condition": "top", "deviations": devs }));
        let floor = tolerance::relative(tolerance::EXACT, *g);
        for k in (1..devs.len()).filter(|&k| shifts[k - 1] >= *asymptotic) {
            worst.observe_scaled(1.1 * devs[k - 1] - devs[k], floor, || {
                json!({ "alpha": alpha, "g": g, "condition": "ladder", "rung": k, "asymptotic_shift": asymptotic, "deviations": devs })
            });
        }
    }
    Ok(worst.finish("weight_limit", json!({ "family": family, "weight": f, "q": q, "shifts": shifts })))
}

/// Weighted L¹ distance between `ξ(R0 + P_n W P_n, R0)` and `ξ(R0 + W, R0)`
/// with `R = (A + a)^{-p}`; zero at `n = dim` and nonincreasing in `n`.
pub fn check_projection_convergence(
    a0: &HermitianOperator,
    v: &HermitianOperator,
    shift: f64,
    p: f64,
    ns: &[usize],
) -> Result<PropertyReport> {
    let q = q_of(p)?;
    let r0 = resolvent_power(a0, shift, p)?;
    let w = resolvent_power(&a0.try_add(v)?, shift, p)?.try_sub(&r0)?;
    let full = ssf(&(&r0 + &w), &r0)?;
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let dists = ns
        .iter()
        .map(|&n| Ok(l1_distance(&ssf(&(&r0 + &compress_by_projection(&w, n)?), &r0)?, &full, q - 1)))
        .collect::<Result<Vec<_>>>()?;
    let slack = 1e-10;
    let mut worst = Worst::one_sided(slack);
    for (k, &n) in ns.iter().enumerate() {
        if n == a0.dim() {
            worst.observe_scaled(-dists[k], 1e-9, || json!({ "condition": "full", "n": n, "distance": dists[k] }));
        }
        if k > 0 {
            worst.observe(dists[k - 1] - dists[k], || json!({ "condition": "ladder", "n": [ns[k - 1], n], "distance": [dists[k - 1], dists[k]] }));
        }
    }
    Ok(worst.finish("projection_convergence", json!({ "a0": a0, "v": v, "shift": shift, "p": p, "q": q, "ns": ns, "distances": dists })))
}

/// `g(α1V) + g(α2V) − g((α1+α2)V) ≥ 0` and `g((α1−α2)V) − g(α1V) − g(−α2V) ≥ 0`.
pub fn check_subadditivity(ctx: &FunctionalContext, v: &HermitianOperator, pairs: &[(f64, f64)]) -> Result<PropertyReport> {
    require(ctx.weight().is_nonincreasing(), "subadditivity requires a nonincreasing weight")?;
    let g = |a: f64| g_functional(ctx, &v.scale(a));
    let mut rows = Vec::with_capacity(pairs.len());
    let mut scale = 0.0_f64;
    for &(a1, a2) in pairs {
        if !(a1 >= 0.0 && a2 >= 0.0) {
            return Err(Error::OutOfRange { name: "alpha pair", detail: format!("({a1}, {a2}) must be nonnegative") });
        }
        let vals = [g(a1)?, g(a2)?, g(a1 + a2)?, g(a1 - a2)?, g(-a2)?];
        scale = vals.iter().fold(scale, |m, x| m.max(x.abs()));
        rows.push((a1, a2, vals));
    }
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::ONE_SIDED, scale));
    for (a1, a2, [g1, g2, gs, gd, gn]) in rows {
        worst.observe(g1 + g2 - gs, || json!({ "alphas": [a1, a2], "inequality": "sum", "values": [g1, g2, gs] }));
        worst.observe(gd - g1 - gn, || json!({ "alphas": [a1, a2], "inequality": "difference", "values": [gd, g1, gn] }));
    }
    Ok(worst.finish("subadditivity", json!({ "a0": ctx.a0(), "v": v, "weight": ctx.weight() })))
}

/// `ξ(A0+V2+Δ, A0) − ξ(A0+V2, A0) ≥ 0` at every merged midpoint, `Δ ⪰ 0`.
pub fn check_ssf_monotone(a0: &HermitianOperator, v2: &HermitianOperator, delta: &HermitianOperator) -> Result<PropertyReport> {
    let gap = psd_gap(delta);
    if gap < -delta.psd_tolerance() {
        return Err(Error::InvalidMatrix(format!("increment is not positive semidefinite (min eigenvalue {gap:e})")));
    }
    let lower = ssf(&a0.try_add(v2)?, a0)?;
    let upper = ssf(&(&a0.try_add(v2)? + delta), a0)?;
    let mut worst = Worst::one_sided(tolerance::ONE_SIDED);
    for m in upper.merged_midpoints(&lower) {
        let (u, l) = (upper.eval(m), lower.eval(m));
        worst.observe(u - l, || json!({ "lambda": m, "upper": u, "lower": l }));
    }
    Ok(worst.finish("ssf_monotone", json!({ "a0": a0, "v2": v2, "delta": delta })))
}

/// `‖ξ(A1+W, A1) − ξ(A1+W, A0) − ξ(A0, A1)‖_{L¹} ≤ 1e-10 dim`.
pub fn check_chain_rule(a0: &HermitianOperator, a1: &HermitianOperator, w: &HermitianOperator) -> Result<PropertyReport> {
    let top = a1.try_add(w)?;
    let lhs = ssf(&top, a1)?;
    let rhs = ssf(&top, a0)?.add(&ssf(a0, a1)?);
    let d = l1_distance(&lhs, &rhs, 0);
    let mut worst = Worst::identity(tolerance::EXACT * a0.dim() as f64);
    worst.observe(d, || json!({ "distance": d }));
    Ok(worst.finish("chain_rule", json!({ "a0": a0, "a1": a1, "w": w })))
}

/// `‖(A+a)^{-1} − (A0+a)^{-1}‖₁ − ∫|ξ|(λ+a)^{-2} ≥ 0` for each shift.
pub fn check_trace_norm_bound(a0: &HermitianOperator, v: &HermitianOperator, shifts: &[f64]) -> Result<PropertyReport> {
    let a = a0.try_add(v)?;
    let xi = ssf(&a, a0)?;
    let mut rows = Vec::with_capacity(shifts.len());
    let mut scale = 0.0_f64;
    for &s in shifts {
        let rhs = trace_norm_diff(&resolvent_power(&a, s, 1.0)?, &resolvent_power(a0, s, 1.0)?)?;
        let lhs: f64 = xi.intervals().map(|(lo, hi, val)| val.abs() * (1.0 / (lo + s) - 1.0 / (hi + s))).fold(0.0, |acc, x| acc + x);
        scale = scale.max(rhs.abs()).max(lhs.abs());
        rows.push((s, lhs, rhs));
    }
    let mut worst = Worst::one_sided(tolerance::relative(tolerance::EXACT, scale));
    for (s, lhs, rhs) in rows {
        worst.observe(rhs - lhs, || json!({ "shift": s, "weighted_l1": lhs, "trace_norm": rhs }));
    }
    Ok(worst.finish("trace_norm_bound", json!({ "a0": a0, "v": v, "shifts": shifts })))
}

#[cfg(test)]
mod tests;
