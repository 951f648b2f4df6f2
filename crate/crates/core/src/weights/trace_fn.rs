use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Test function `F` with hand-coded derivative `F'` for the trace formula
/// `tr(F(A) − F(A0)) = ∫ F'(λ) ξ(λ) dλ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceTestFunction {
    /// `Σ coeffs[k] λ^k`, degree at most 6.
    Polynomial { coeffs: Vec<f64> },
    /// `exp(-t λ)`.
    Exp { t: f64 },
    /// `tanh(λ)`.
    Tanh,
    /// `(λ + shift)^{-p}`, defined for `λ > -shift`.
    ResolventPower { shift: f64, p: f64 },
}

impl TraceTestFunction {
    /// Validates parameters and the derivative against central differences.
    pub fn new(f: TraceTestFunction) -> Result<Self> {
        match &f {
            TraceTestFunction::Polynomial { coeffs } => {
                if coeffs.is_empty() || coeffs.len() > 7 {
                    return Err(Error::OutOfRange { name: "coeffs", detail: format!("degree {} not in 0..=6", coeffs.len() as i64 - 1) });
                }
            }
            TraceTestFunction::Exp { t } if !t.is_finite() => {
                return Err(Error::OutOfRange { name: "t", detail: "must be finite".into() });
            }
            TraceTestFunction::ResolventPower { shift, p } if !(shift.is_finite() && *p > 0.0) => {
                return Err(Error::OutOfRange { name: "p", detail: format!("{p} must be positive") });
            }
            _ => {}
        }
        f.check_derivative()?;
        Ok(f)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        TraceTestFunction::Polynomial { coeffs }
    }

    pub fn label(&self) -> String {
        match self {
            TraceTestFunction::Polynomial { coeffs } => {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(k, c)| match k {
                        0 => format!("{c}"),
                        1 => format!("{c}*x"),
                        _ => format!("{c}*x^{k}"),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            }
            TraceTestFunction::Exp { t } => format!("exp(-{t}*x)"),
            TraceTestFunction::Tanh => "tanh(x)".into(),
            TraceTestFunction::ResolventPower { shift, p } => format!("(x+{shift})^-{p}"),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            TraceTestFunction::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            TraceTestFunction::Exp { t } => (-t * x).exp(),
            TraceTestFunction::Tanh => x.tanh(),
            TraceTestFunction::ResolventPower { shift, p } => (x + shift).powf(-p),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            TraceTestFunction::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c),
            TraceTestFunction::Exp { t } => -t * (-t * x).exp(),
            TraceTestFunction::Tanh => {
                let c = x.cosh();
                1.0 / (c * c)
            }
            TraceTestFunction::ResolventPower { shift, p } => -p * (x + shift).powf(-p - 1.0),
        }
    }

    /// Jump-free domain lower bound, if any.
    pub fn domain_floor(&self) -> Option<f64> {
        match self {
            TraceTestFunction::ResolventPower { shift, .. } => Some(-shift),
            _ => None,
        }
    }

    fn check_derivative(&self) -> Result<()> {
        let lo = self.domain_floor().map_or(-5.0, |f| f + 0.5);
        for k in 0..41 {
            let x = lo + 0.25 * k as f64;
            let h = 1e-5 * (1.0 + x.abs());
            let fd = (self.value(x + h) - self.value(x - h)) / (2.0 * h);
            let d = self.derivative(x);
            if (fd - d).abs() > 1e-6 * (1.0 + d.abs()) {
                return Err(Error::Numerical(format!("derivative of {} inconsistent at {x}: {d} vs {fd}", self.label())));
            }
        }
        Ok(())
    }
}
