use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use ssf_lab_core::weights::WeightKind;
use ssf_lab_core::{Ensemble, Weight};

use crate::error::CliError;
use crate::scenario::{check_weight, trial_weight, Tag};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub generator: Generator,
    /// Property or computation tag.
    pub property: String,
    #[serde(default)]
    pub weight: Option<Weight>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub tolerance: Option<ToleranceOverride>,
}

/// How operands are drawn for each trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    /// Every operand from one ensemble, with the perturbations scaled.
    Random {
        ensemble: Ensemble,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Cycles GOE, GUE, diagonal by trial index.
    Mixed {
        #[serde(default = "one")]
        scale: f64,
    },
    /// Dirichlet Laplacian with seeded diagonal potentials.
    Schrodinger {
        #[serde(default = "half")]
        potential_scale: f64,
    },
}

impl Default for Generator {
    fn default() -> Self {
        Generator::Random { ensemble: Ensemble::Goe, scale: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub dims: Vec<usize>,
    pub trials: usize,
    /// Uniform α grid points; `alpha_random` seeded points are added.
    pub alpha_grid: usize,
    pub alpha_random: usize,
    pub alpha_range: [f64; 2],
    /// Explicit α values where a check uses a short list.
    pub alphas: Vec<f64>,
    /// Rungs `a0 · 2^k`, `k < a_ladder`.
    pub a_ladder: usize,
    pub p: Vec<f64>,
    pub q: Vec<u32>,
    pub alpha_max: f64,
    pub ratio_points: usize,
    pub s_points: usize,
    pub s_range: [f64; 2],
    /// Seeded threshold positions in `[-1, 1]` replacing the weight's own.
    pub threshold_draws: usize,
    pub betas: Vec<f64>,
    pub pairs: usize,
    pub projection_step: usize,
    pub margin: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            dims: vec![16],
            trials: 1,
            alpha_grid: 11,
            alpha_random: 5,
            alpha_range: [0.0, 1.0],
            alphas: vec![0.25, 0.5, 1.0, 2.0],
            a_ladder: 13,
            p: vec![1.0, 2.0, 3.0],
            q: vec![1, 3],
            alpha_max: 4096.0,
            ratio_points: 13,
            s_points: 101,
            s_range: [-2.0, 2.0],
            threshold_draws: 0,
            betas: vec![0.25, 0.5, 0.75],
            pairs: 10,
            projection_step: 4,
            margin: 0.5,
        }
    }
}

/// Replaces the tolerance of every report in the scenario.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ToleranceOverride {
    /// Use this absolute tolerance.
    Absolute(f64),
    /// Multiply the computed tolerance.
    Factor(f64),
}

impl ToleranceOverride {
    pub fn apply(self, tol: f64) -> f64 {
        match self {
            ToleranceOverride::Absolute(t) => t,
            ToleranceOverride::Factor(c) => c * tol,
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let mut names = HashSet::new();
        for (i, s) in self.scenarios.iter().enumerate() {
            let at = |field: &str, msg: String| CliError::Config(format!("scenarios[{i}] ({}).{field}: {msg}", s.name));
            if s.name.is_empty() || !s.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                return Err(at("name", "must be nonempty and use only [A-Za-z0-9_-]".into()));
            }
            if !names.insert(s.name.as_str()) {
                return Err(at("name", "duplicate scenario name".into()));
            }
            let tag: Tag = s.property.parse().map_err(|e: String| at("property", e))?;
            let p = &s.params;
            if p.dims.is_empty() || p.dims.contains(&0) {
                return Err(at("params.dims", "must be a nonempty list of dimensions ≥ 1".into()));
            }
            if p.trials == 0 {
                return Err(at("params.trials", "must be ≥ 1".into()));
            }
            if !(p.alpha_range[0] < p.alpha_range[1]) {
                return Err(at("params.alpha_range", "must be an increasing pair".into()));
            }
            if !(p.s_range[0] < p.s_range[1]) || p.s_points < 2 {
                return Err(at("params.s_range", "needs an increasing pair and s_points ≥ 2".into()));
            }
            if p.p.iter().any(|&x| !(x >= 1.0)) || p.p.is_empty() {
                return Err(at("params.p", "exponents must be ≥ 1".into()));
            }
            if p.q.is_empty() || p.q.iter().any(|&q| q == 0) {
                return Err(at("params.q", "must be a nonempty list of positive integers".into()));
            }
            if p.a_ladder == 0 || p.ratio_points < 2 || !(p.alpha_max > 0.0) || p.projection_step == 0 || !(p.margin > 0.0) {
                return Err(at("params", "a_ladder ≥ 1, ratio_points ≥ 2, alpha_max > 0, projection_step ≥ 1, margin > 0".into()));
            }
            if let Some(w) = &s.weight {
                w.validate().map_err(|e| at("weight", e.to_string()))?;
            }
            if tag.needs_weight() && s.weight.is_none() && p.threshold_draws == 0 {
                return Err(at("weight", format!("property {} needs a weight or params.threshold_draws", s.property)));
            }
            if p.threshold_draws > 0 && !matches!(s.weight.as_ref().map(|w| &w.kind), None | Some(WeightKind::Threshold { .. })) {
                return Err(at("params.threshold_draws", "only threshold weights can be redrawn".into()));
            }
            let effective = if p.threshold_draws > 0 { trial_weight(tag, s, &[0.0], 0) } else { s.weight.clone() };
            if let Some(w) = effective {
                check_weight(tag, &w).map_err(|e| at("weight", e))?;
            }
            if let Some((lo, hi)) = tag.alpha_domain() {
                if p.alpha_range[0] < lo || p.alpha_range[1] > hi {
                    return Err(at("params.alpha_range", format!("must lie in [{lo}, {hi}] for {}", s.property)));
                }
            }
            if let Some(t) = s.tolerance {
                let v = match t {
                    ToleranceOverride::Absolute(v) | ToleranceOverride::Factor(v) => v,
                };
                if !(v > 0.0) || !v.is_finite() {
                    return Err(at("tolerance", "override must be positive and finite".into()));
                }
            }
            match &s.generator {
                Generator::Random { scale, .. } | Generator::Mixed { scale } if !(*scale > 0.0) => {
                    return Err(at("generator.scale", "must be positive".into()));
                }
                Generator::Schrodinger { potential_scale } if !(*potential_scale >= 0.0) => {
                    return Err(at("generator.potential_scale", "must be nonnegative".into()));
                }
                Generator::Schrodinger { .. } if p.dims.contains(&1) => {
                    return Err(at("params.dims", "discrete Schrödinger operators need dimension ≥ 2".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }
}
