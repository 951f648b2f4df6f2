//! Property tags, per-trial instance generation and evaluation.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::json;
use ssf_lab_core::functionals::{coupling_curve, g_a_weighted, g_functional, strong_coupling_gamma};
use ssf_lab_core::operator::{build_discrete_schrodinger, build_random_hermitian, derive_seed};
use ssf_lab_core::properties::{self as props, alpha_grid, pair_shift_floor, Sidedness, PROPERTIES};
use ssf_lab_core::ssf::{integrated_ssf, ssf};
use ssf_lab_core::weights::WeightKind;
use ssf_lab_core::{
    CouplingFamily, Ensemble, FunctionalContext, HermitianOperator, PropertyReport, Result, Sign, StepFunction, TraceTestFunction,
    Weight,
};

use crate::config::{Generator, Params, Scenario};
use crate::error::CliError;

/// Everything a scenario can run: the listed properties plus the identity
/// checks the properties rest on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Th1Concavity,
    Cor1Convexity,
    Cor2OperatorFamily,
    BsIdentity,
    BsMonotone,
    Invariance,
    WeightedConcavity,
    WeightLimit,
    ProjectionConvergence,
    Subadditivity,
    SsfMonotone,
    ChainRule,
    TraceNormBound,
    TraceIdentity,
    KreinTrace,
    SumReduction,
    InverseConvexity,
    StrongCoupling,
    CouplingConcavity,
}

/// Computation tags accepted by `run` besides the listed properties.
pub const EXTRA_TAGS: [(&str, &str); 6] = [
    ("trace_identity", "∫ξ = tr V"),
    ("krein_trace", "tr(F(A0+V) − F(A0)) = ∫F'ξ"),
    ("sum_reduction", "ζ of a shifted scalar pair equals an eigenvalue sum"),
    ("inverse_convexity", "operator convexity of X ↦ X^(-1)"),
    ("strong_coupling", "g(αV)/α nonincreasing, tends to γ"),
    ("coupling_concavity", "α ↦ ∫_0^α tr[f(A0+sV)V] ds concave"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightNeed {
    None,
    Any,
    Nonincreasing,
    NonnegativeNonincreasing,
    Nondecreasing,
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        use Tag::*;
        Ok(match s {
            "th1_concavity" => Th1Concavity,
            "cor1_convexity" => Cor1Convexity,
            "cor2_operator_family" => Cor2OperatorFamily,
            "bs_identity" => BsIdentity,
            "bs_monotone" => BsMonotone,
            "invariance" => Invariance,
            "weighted_concavity" => WeightedConcavity,
            "weight_limit" => WeightLimit,
            "projection_convergence" => ProjectionConvergence,
            "subadditivity" => Subadditivity,
            "ssf_monotone" => SsfMonotone,
            "chain_rule" => ChainRule,
            "trace_norm_bound" => TraceNormBound,
            "trace_identity" => TraceIdentity,
            "krein_trace" => KreinTrace,
            "sum_reduction" => SumReduction,
            "inverse_convexity" => InverseConvexity,
            "strong_coupling" => StrongCoupling,
            "coupling_concavity" => CouplingConcavity,
            other => {
                let known: Vec<&str> = PROPERTIES.iter().chain(EXTRA_TAGS.iter()).map(|p| p.0).collect();
                return Err(format!("unknown tag `{other}`; expected one of {}", known.join(", ")));
            }
        })
    }
}

impl Tag {
    pub fn weight_need(self) -> WeightNeed {
        use Tag::*;
        match self {
            Th1Concavity | BsMonotone | Subadditivity | StrongCoupling | CouplingConcavity => WeightNeed::Nonincreasing,
            Cor2OperatorFamily | WeightedConcavity | WeightLimit => WeightNeed::NonnegativeNonincreasing,
            Cor1Convexity => WeightNeed::Nondecreasing,
            BsIdentity => WeightNeed::Any,
            _ => WeightNeed::None,
        }
    }

    pub fn needs_weight(self) -> bool {
        self.weight_need() != WeightNeed::None
    }

    /// Admissible range of the α grid, when the check restricts it.
    pub fn alpha_domain(self) -> Option<(f64, f64)> {
        use Tag::*;
        match self {
            Th1Concavity | Cor1Convexity | WeightedConcavity | WeightLimit => Some((0.0, 1.0)),
            Subadditivity => Some((0.0, f64::INFINITY)),
            _ => None,
        }
    }
}

/// Checks a weight against what the tag requires; `Err` holds the reason.
pub fn check_weight(tag: Tag, w: &Weight) -> std::result::Result<(), String> {
    let ok = match tag.weight_need() {
        WeightNeed::None | WeightNeed::Any => true,
        WeightNeed::Nonincreasing => w.is_nonincreasing(),
        WeightNeed::NonnegativeNonincreasing => w.is_nonincreasing() && w.is_nonnegative(),
        WeightNeed::Nondecreasing => w.is_nondecreasing(),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("weight does not satisfy {:?}", tag.weight_need()))
    }
}

/// Seeded threshold positions shared by every trial of a scenario.
pub fn threshold_draws(master: u64, scenario: usize, count: usize) -> Vec<f64> {
    alpha_grid(-1.0, 1.0, 0, count, derive_seed(master, &[scenario as u64, u64::MAX]))
}

/// The weight for one trial: the configured weight, with its threshold moved
/// to the trial's draw when draws are requested.
pub fn trial_weight(tag: Tag, s: &Scenario, draws: &[f64], trial: usize) -> Option<Weight> {
    if draws.is_empty() {
        return s.weight.clone();
    }
    let lambda0 = draws[trial % draws.len()];
    let side = match s.weight.as_ref().map(|w| &w.kind) {
        Some(WeightKind::Threshold { side, .. }) => *side,
        _ if tag.weight_need() == WeightNeed::Nondecreasing => Sign::Plus,
        _ => Sign::Minus,
    };
    Some(Weight::threshold(lambda0, side))
}

/// Operand source for one trial.
struct Operands<'a> {
    generator: &'a Generator,
    dim: usize,
    trial: usize,
    master: u64,
    scenario: usize,
}

const MIXED: [Ensemble; 3] = [Ensemble::Goe, Ensemble::Gue, Ensemble::Diagonal];

impl Operands<'_> {
    fn seed(&self, k: u64) -> u64 {
        derive_seed(self.master, &[self.scenario as u64, self.trial as u64, k])
    }

    fn ensemble(&self) -> Option<(Ensemble, f64)> {
        match *self.generator {
            Generator::Random { ensemble, scale } => Some((ensemble, scale)),
            Generator::Mixed { scale } => Some((MIXED[self.trial % 3], scale)),
            Generator::Schrodinger { .. } => None,
        }
    }

    fn base(&self) -> Result<HermitianOperator> {
        match self.ensemble() {
            Some((e, _)) => build_random_hermitian(self.dim, e, self.seed(0), 1.0),
            None => build_discrete_schrodinger(self.dim, &vec![0.0; self.dim]),
        }
    }

    fn perturbation(&self, k: u64) -> Result<HermitianOperator> {
        match (self.ensemble(), self.generator) {
            (Some((e, scale)), _) => build_random_hermitian(self.dim, e, self.seed(k), scale),
            (None, Generator::Schrodinger { potential_scale }) if *potential_scale > 0.0 => {
                build_random_hermitian(self.dim, Ensemble::Diagonal, self.seed(k), *potential_scale)
            }
            _ => Ok(HermitianOperator::zeros(self.dim)),
        }
    }

    /// `H²` for a fresh perturbation `H`.
    fn psd(&self, k: u64) -> Result<HermitianOperator> {
        let h = self.perturbation(k)?;
        HermitianOperator::new(h.entries() * h.entries())
    }

    fn positive_definite(&self, k: u64) -> Result<HermitianOperator> {
        Ok(&self.psd(k)? + &HermitianOperator::identity(self.dim))
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Ladder `a · 2^k`, `k < rungs`.
fn ladder(a: f64, rungs: usize) -> Vec<f64> {
    (0..rungs).map(|k| a * 2f64.powi(k as i32)).collect()
}

fn severity(r: &PropertyReport) -> f64 {
    let s = match r.sidedness {
        Sidedness::OneSided => -r.worst_gap,
        Sidedness::Identity => r.worst_gap.abs(),
    } / r.tolerance;
    if s.is_nan() {
        f64::INFINITY
    } else {
        s
    }
}

/// Folds reports over several exponents into one: the worst part by
/// gap relative to tolerance, with the trial counts added up.
fn merge(parts: Vec<(String, PropertyReport)>) -> PropertyReport {
    let trials = parts.iter().map(|p| p.1.trials).sum();
    let summary: Vec<_> = parts
        .iter()
        .map(|(label, r)| json!({ "part": label, "worst_gap": r.worst_gap, "tolerance": r.tolerance, "pass": r.pass }))
        .collect();
    let (label, worst) = parts
        .into_iter()
        .reduce(|a, b| if severity(&b.1) > severity(&a.1) { b } else { a })
        .expect("at least one part");
    let mut witness = worst.witness;
    if let serde_json::Value::Object(m) = &mut witness {
        m.insert("part".into(), json!(label));
        m.insert("parts".into(), json!(summary));
    }
    PropertyReport::new(&worst.property, worst.sidedness, trials, worst.worst_gap, worst.tolerance, witness)
}

/// Plot-ready CSV of ξ, ζ^- and ζ^+ at breakpoints and midpoints.
pub fn zeta_trace_csv(xi: &StepFunction) -> String {
    let mut out = String::from("lambda,xi,zeta_minus,zeta_plus\n");
    let b = xi.breakpoints();
    let mut points = Vec::with_capacity(2 * b.len());
    for (k, &x) in b.iter().enumerate() {
        points.push(x);
        if let Some(&y) = b.get(k + 1) {
            points.push(0.5 * (x + y));
        }
    }
    for x in points {
        let _ = writeln!(out, "{:?},{:?},{:?},{:?}", x, xi.eval(x), integrated_ssf(xi, x, Sign::Minus), integrated_ssf(xi, x, Sign::Plus));
    }
    out
}

pub struct TrialOutcome {
    pub report: PropertyReport,
    /// `(file name, contents)` under `curves/`.
    pub curves: Vec<(String, String)>,
}

/// Generates the instance for `(scenario, trial)` and runs the check.
pub fn evaluate(s: &Scenario, index: usize, trial: usize, master: u64, draws: &[f64]) -> std::result::Result<TrialOutcome, CliError> {
    let tag: Tag = s.property.parse().map_err(CliError::Config)?;
    let p = &s.params;
    let ops = Operands { generator: &s.generator, dim: p.dims[trial % p.dims.len()], trial, master, scenario: index };
    let weight = trial_weight(tag, s, draws, trial);
    let context = format!("scenario {} trial {trial}", s.name);
    let (mut report, curves) = run_tag(tag, p, &ops, weight, trial == 0, &s.name).map_err(|e| CliError::from_core(&context, e))?;
    if let Some(t) = s.tolerance {
        report = PropertyReport::new(&report.property, report.sidedness, report.trials, report.worst_gap, t.apply(report.tolerance), report.witness);
    }
    Ok(TrialOutcome { report, curves })
}

fn run_tag(
    tag: Tag,
    p: &Params,
    ops: &Operands,
    weight: Option<Weight>,
    with_curves: bool,
    name: &str,
) -> Result<(PropertyReport, Vec<(String, String)>)> {
    let weight = || weight.clone().expect("validated: tag has a weight");
    let grid = || alpha_grid(p.alpha_range[0], p.alpha_range[1], p.alpha_grid, p.alpha_random, ops.seed(1000));
    let a0 = ops.base()?;
    let mut curves = Vec::new();
    let zeta = |a0: &HermitianOperator, v: &HermitianOperator, curves: &mut Vec<(String, String)>| -> Result<()> {
        if with_curves {
            curves.push((format!("{name}-zeta.csv"), zeta_trace_csv(&ssf(&a0.try_add(v)?, a0)?)));
        }
        Ok(())
    };
    let coupling = |ctx: &FunctionalContext, v: &HermitianOperator, curves: &mut Vec<(String, String)>| -> Result<()> {
        if with_curves {
            curves.push((format!("{name}-coupling.csv"), coupling_curve(ctx, v, &p.alphas)?.to_csv()));
        }
        Ok(())
    };
    let report = match tag {
        Tag::TraceIdentity => {
            let v = ops.perturbation(1)?;
            zeta(&a0, &v, &mut curves)?;
            props::check_trace_identity(&a0, &v)?
        }
        Tag::KreinTrace => {
            let v = ops.perturbation(1)?;
            zeta(&a0, &v, &mut curves)?;
            let fs = [TraceTestFunction::monomial(2), TraceTestFunction::monomial(3), TraceTestFunction::Exp { t: 0.5 }, TraceTestFunction::Tanh];
            props::check_krein_trace(&a0, &v, &fs)?
        }
        Tag::Th1Concavity | Tag::Cor1Convexity => {
            let (v1, v2) = (ops.perturbation(1)?, ops.perturbation(2)?);
            zeta(&a0, &v1, &mut curves)?;
            if tag == Tag::Th1Concavity {
                props::check_concavity_th1(&a0, &v1, &v2, &weight(), &grid())?
            } else {
                props::check_convexity_cor1(&a0, &v1, &v2, &weight(), &grid())?
            }
        }
        Tag::Cor2OperatorFamily => {
            let fam = CouplingFamily::path(a0.clone(), ops.perturbation(1)?, ops.perturbation(2)?, ops.psd(3)?.scale(0.3), p.alpha_range[0], p.alpha_range[1])?;
            zeta(&a0, &fam.member(p.alpha_range[1])?, &mut curves)?;
            props::check_operator_family_cor2(&fam, &weight(), &grid())?
        }
        Tag::BsIdentity | Tag::BsMonotone | Tag::Subadditivity | Tag::CouplingConcavity => {
            let v = ops.perturbation(1)?;
            let ctx = FunctionalContext::new(a0.clone(), weight());
            zeta(&a0, &v, &mut curves)?;
            coupling(&ctx, &v, &mut curves)?;
            match tag {
                Tag::BsIdentity => props::check_bs_identity(&ctx, &v, &p.alphas)?,
                Tag::BsMonotone => props::check_bs_monotone(&ctx, &v, &linspace(p.s_range[0], p.s_range[1], p.s_points))?,
                Tag::Subadditivity => {
                    let g = alpha_grid(p.alpha_range[0], p.alpha_range[1], 0, 2 * p.pairs, ops.seed(1001));
                    // large with small, alternating which comes first
                    let m = g.len();
                    let pairs: Vec<(f64, f64)> =
                        (0..m / 2).map(|i| if i % 2 == 0 { (g[m - 1 - i], g[i]) } else { (g[i], g[m - 1 - i]) }).collect();
                    props::check_subadditivity(&ctx, &v, &pairs)?
                }
                _ => props::check_coupling_concavity(&ctx, &v, &grid())?,
            }
        }
        Tag::Invariance => {
            let v = ops.perturbation(1)?;
            zeta(&a0, &v, &mut curves)?;
            props::check_invariance(&a0, &v, pair_shift_floor(&a0, &v)?, &p.p)?
        }
        Tag::WeightedConcavity | Tag::WeightLimit => {
            let fam = CouplingFamily::segment(a0.clone(), ops.perturbation(1)?, ops.perturbation(2)?)?;
            zeta(&a0, &fam.member(0.5)?, &mut curves)?;
            let shifts = ladder(fam.shift_floor()?, p.a_ladder);
            let f = weight();
            let mut parts = Vec::new();
            for &q in &p.q {
                let r = if tag == Tag::WeightedConcavity {
                    props::check_weighted_concavity(&fam, &f, &shifts, q, &grid())?
                } else {
                    props::check_weight_limit(&fam, &f, q, &grid(), &shifts)?
                };
                parts.push((format!("q={q}"), r));
            }
            if with_curves && tag == Tag::WeightLimit {
                curves.push((format!("{name}-limit.csv"), limit_curve(&fam, &f, &p.q, &shifts)?));
            }
            merge(parts)
        }
        Tag::ProjectionConvergence => {
            let v = ops.perturbation(1)?;
            zeta(&a0, &v, &mut curves)?;
            let n = a0.dim();
            let mut ns: Vec<usize> = (p.projection_step..=n).step_by(p.projection_step).collect();
            if ns.last() != Some(&n) {
                ns.push(n);
            }
            let shift = pair_shift_floor(&a0, &v)?;
            let parts = p.p.iter().map(|&e| Ok((format!("p={e}"), props::check_projection_convergence(&a0, &v, shift, e, &ns)?))).collect::<Result<Vec<_>>>()?;
            merge(parts)
        }
        Tag::SsfMonotone => {
            let v2 = ops.perturbation(1)?;
            zeta(&a0, &v2, &mut curves)?;
            props::check_ssf_monotone(&a0, &v2, &ops.psd(2)?)?
        }
        Tag::ChainRule => {
            let a1 = &a0 + &ops.perturbation(1)?;
            let w = ops.perturbation(2)?;
            zeta(&a1, &w, &mut curves)?;
            props::check_chain_rule(&a0, &a1, &w)?
        }
        Tag::TraceNormBound => {
            let v = ops.perturbation(1)?;
            zeta(&a0, &v, &mut curves)?;
            props::check_trace_norm_bound(&a0, &v, &ladder(pair_shift_floor(&a0, &v)?, p.a_ladder))?
        }
        Tag::SumReduction => {
            let v = ops.perturbation(1)?;
            let zero = HermitianOperator::zeros(v.dim());
            zeta(&zero, &v, &mut curves)?;
            props::check_sum_reduction(&v, &linspace(p.s_range[0], p.s_range[1], p.s_points), p.margin)?
        }
        Tag::InverseConvexity => {
            let (x, y) = (ops.positive_definite(1)?, ops.positive_definite(2)?);
            zeta(&x, &(&y - &x), &mut curves)?;
            props::check_inverse_convexity(&x, &y, &p.betas)?
        }
        Tag::StrongCoupling => {
            let v = ops.psd(1)?;
            let ctx = FunctionalContext::new(a0.clone(), weight());
            zeta(&a0, &v, &mut curves)?;
            if with_curves {
                curves.push((format!("{name}-ratio.csv"), strong_coupling_gamma(&ctx, &v, p.alpha_max, p.ratio_points)?.curve.to_csv()));
            }
            props::check_strong_coupling(&ctx, &v, p.alpha_max, p.ratio_points)?
        }
    };
    Ok((report, curves))
}

/// `a^{q+1} g_a(α)` against `g(V(α))` at the segment midpoint.
fn limit_curve(fam: &CouplingFamily, f: &Weight, qs: &[u32], shifts: &[f64]) -> Result<String> {
    let ctx = FunctionalContext::new(fam.base().clone(), f.clone());
    let g = g_functional(&ctx, &fam.member(0.5)?)?;
    let mut out = String::from("q,shift,scaled_value,limit\n");
    for &q in qs {
        for &a in shifts {
            let scaled = a.powi(q as i32 + 1) * g_a_weighted(&ctx, fam, 0.5, a, q)?;
            let _ = writeln!(out, "{q},{a:?},{scaled:?},{g:?}");
        }
    }
    Ok(out)
}
