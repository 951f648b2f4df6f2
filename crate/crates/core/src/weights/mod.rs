//! Monotone test functions integrated against the spectral shift function.
//!
//! A [`Weight`] is either a step function (thresholds and levels) or one of a
//! few smooth built-ins with closed-form antiderivatives. Products with the
//! resolvent factor `(λ + a)^{-k}` and affine maps `c + s·f` are supported so
//! the weighted functionals and the `c − f` decomposition can be expressed.
//! Monotonicity of smooth weights is checked by dense sampling.

mod trace_fn;

pub use trace_fn::TraceTestFunction;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::ssf::Sign;

/// Sample count used for monotonicity and decay checks.
pub const SAMPLE_POINTS: usize = 1001;

/// Interval used to validate smooth weights at construction.
const DEFAULT_WINDOW: (f64, f64) = (-50.0, 50.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Nonincreasing,
    Nondecreasing,
    Constant,
}

impl Direction {
    fn flipped(self) -> Self {
        match self {
            Direction::Nonincreasing => Direction::Nondecreasing,
            Direction::Nondecreasing => Direction::Nonincreasing,
            Direction::Constant => Direction::Constant,
        }
    }
}

/// Declared bound `|f(λ)| ≤ constant · (1 + |λ|)^{-exponent}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayBound {
    pub constant: f64,
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightKind {
    /// `χ_{(-∞, λ0]}` (minus) or `χ_{[λ0, ∞)}` (plus).
    Threshold { lambda0: f64, side: Sign },
    /// `levels[0]` below `thresholds[0]`, `levels[k]` between thresholds
    /// `k-1` and `k`, the last level above the last threshold. At a threshold
    /// the larger adjacent level is taken.
    Step { thresholds: Vec<f64>, levels: Vec<f64> },
    Constant { value: f64 },
    /// `exp(-t λ)`.
    ExpDecay { t: f64 },
    /// `1` for `λ ≤ center`, `(1 + λ − center)^{-exponent}` above.
    PowerTail { center: f64, exponent: f64 },
    /// `1 / (1 + exp((λ − center) / width))`.
    Logistic { center: f64, width: f64 },
    /// `inner(λ) · (λ + shift)^{-exponent}`, defined for `λ > -shift`.
    Resolvent { inner: Box<Weight>, shift: f64, exponent: u32 },
    /// `offset + factor · inner(λ)`.
    Affine { offset: f64, factor: f64, inner: Box<Weight> },
}

/// A bounded-variation test function with known monotonicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weight {
    #[serde(flatten)]
    pub kind: WeightKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecayBound>,
}

impl From<WeightKind> for Weight {
    fn from(kind: WeightKind) -> Self {
        Weight { kind, decay: None }
    }
}

impl Weight {
    /// Validating constructor.
    pub fn new(kind: WeightKind) -> Result<Self> {
        let w = Weight::from(kind);
        w.validate()?;
        Ok(w)
    }

    pub fn threshold(lambda0: f64, side: Sign) -> Self {
        WeightKind::Threshold { lambda0, side }.into()
    }

    pub fn constant(value: f64) -> Self {
        WeightKind::Constant { value }.into()
    }

    pub fn step(thresholds: Vec<f64>, levels: Vec<f64>) -> Result<Self> {
        Self::new(WeightKind::Step { thresholds, levels })
    }

    pub fn exp_decay(t: f64) -> Result<Self> {
        Self::new(WeightKind::ExpDecay { t })
    }

    pub fn power_tail(center: f64, exponent: f64) -> Result<Self> {
        Self::new(WeightKind::PowerTail { center, exponent })
    }

    pub fn logistic(center: f64, width: f64) -> Result<Self> {
        Self::new(WeightKind::Logistic { center, width })
    }

    /// `offset + factor · self`.
    pub fn affine(&self, offset: f64, factor: f64) -> Self {
        WeightKind::Affine { offset, factor, inner: Box::new(self.clone()) }.into()
    }

    /// Attaches a decay bound after checking it on `[lo, hi]`.
    pub fn with_decay(mut self, constant: f64, exponent: f64, lo: f64, hi: f64) -> Result<Self> {
        let bound = DecayBound { constant, exponent };
        for x in linspace(lo, hi, SAMPLE_POINTS) {
            let v = self.eval(x)?.abs();
            if v > constant * (1.0 + x.abs()).powf(-exponent) * (1.0 + 1e-12) {
                return Err(Error::InvalidWeight(format!("decay bound violated at λ = {x}: |f| = {v:e}")));
            }
        }
        self.decay = Some(bound);
        Ok(self)
    }

    pub fn direction(&self) -> Direction {
        match &self.kind {
            WeightKind::Threshold { side: Sign::Minus, .. } => Direction::Nonincreasing,
            WeightKind::Threshold { side: Sign::Plus, .. } => Direction::Nondecreasing,
            WeightKind::Constant { .. } => Direction::Constant,
            WeightKind::Step { levels, .. } => {
                if levels.windows(2).all(|w| w[0] == w[1]) {
                    Direction::Constant
                } else if levels.windows(2).all(|w| w[0] >= w[1]) {
                    Direction::Nonincreasing
                } else {
                    Direction::Nondecreasing
                }
            }
            WeightKind::ExpDecay { t } => {
                if *t > 0.0 {
                    Direction::Nonincreasing
                } else if *t < 0.0 {
                    Direction::Nondecreasing
                } else {
                    Direction::Constant
                }
            }
            WeightKind::PowerTail { .. } | WeightKind::Logistic { .. } => Direction::Nonincreasing,
            WeightKind::Resolvent { .. } => Direction::Nonincreasing,
            WeightKind::Affine { factor, inner, .. } => {
                if *factor > 0.0 {
                    inner.direction()
                } else if *factor < 0.0 {
                    inner.direction().flipped()
                } else {
                    Direction::Constant
                }
            }
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        matches!(self.direction(), Direction::Nonincreasing | Direction::Constant)
    }

    pub fn is_nondecreasing(&self) -> bool {
        matches!(self.direction(), Direction::Nondecreasing | Direction::Constant)
    }

    /// True when the weight is nonnegative everywhere it is defined.
    pub fn is_nonnegative(&self) -> bool {
        match &self.kind {
            WeightKind::Threshold { .. } => true,
            WeightKind::Step { levels, .. } => levels.iter().all(|&l| l >= 0.0),
            WeightKind::Constant { value } => *value >= 0.0,
            WeightKind::ExpDecay { .. } | WeightKind::PowerTail { .. } | WeightKind::Logistic { .. } => true,
            WeightKind::Resolvent { inner, .. } => inner.is_nonnegative(),
            WeightKind::Affine { offset, factor, inner } => match inner.range() {
                Some((lo, hi)) => offset + factor * lo >= 0.0 && offset + factor * hi >= 0.0,
                None => false,
            },
        }
    }

    /// `(inf, sup)` of the weight when bounded.
    fn range(&self) -> Option<(f64, f64)> {
        match &self.kind {
            WeightKind::Threshold { .. } | WeightKind::PowerTail { .. } | WeightKind::Logistic { .. } => Some((0.0, 1.0)),
            WeightKind::Step { levels, .. } => Some((
                levels.iter().copied().fold(f64::INFINITY, f64::min),
                levels.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )),
            WeightKind::Constant { value } => Some((*value, *value)),
            WeightKind::ExpDecay { t } if *t == 0.0 => Some((1.0, 1.0)),
            WeightKind::ExpDecay { .. } | WeightKind::Resolvent { .. } => None,
            WeightKind::Affine { offset, factor, inner } => {
                let (lo, hi) = inner.range()?;
                let (a, b) = (offset + factor * lo, offset + factor * hi);
                Some((a.min(b), a.max(b)))
            }
        }
    }

    /// Checks parameters and, for smooth weights, sampled monotonicity on a
    /// default window.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            WeightKind::Threshold { lambda0, .. } => finite("lambda0", *lambda0)?,
            WeightKind::Constant { value } => finite("value", *value)?,
            WeightKind::Step { thresholds, levels } => {
                if levels.len() != thresholds.len() + 1 {
                    return Err(Error::InvalidWeight(format!(
                        "{} thresholds need {} levels, got {}",
                        thresholds.len(),
                        thresholds.len() + 1,
                        levels.len()
                    )));
                }
                if thresholds.iter().chain(levels).any(|x| !x.is_finite()) {
                    return Err(Error::InvalidWeight("non-finite threshold or level".into()));
                }
                if thresholds.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidWeight("thresholds must be strictly increasing".into()));
                }
                let down = levels.windows(2).all(|w| w[0] >= w[1]);
                let up = levels.windows(2).all(|w| w[0] <= w[1]);
                if !down && !up {
                    return Err(Error::InvalidWeight("step levels are not monotone".into()));
                }
            }
            WeightKind::ExpDecay { t } => finite("t", *t)?,
            WeightKind::PowerTail { center, exponent } => {
                finite("center", *center)?;
                if !(*exponent > 0.0) || !exponent.is_finite() {
                    return Err(Error::InvalidWeight(format!("power-tail exponent {exponent} must be positive")));
                }
            }
            WeightKind::Logistic { center, width } => {
                finite("center", *center)?;
                if !(*width > 0.0) || !width.is_finite() {
                    return Err(Error::InvalidWeight(format!("logistic width {width} must be positive")));
                }
            }
            WeightKind::Resolvent { inner, shift, exponent } => {
                inner.validate()?;
                finite("shift", *shift)?;
                if *exponent < 1 {
                    return Err(Error::InvalidWeight("resolvent exponent must be at least 1".into()));
                }
                if !inner.is_nonincreasing() || !inner.is_nonnegative() {
                    return Err(Error::InvalidWeight("resolvent weight needs a nonnegative nonincreasing inner weight".into()));
                }
                return self.check_monotone(-shift + 0.5, -shift + 50.0);
            }
            WeightKind::Affine { offset, factor, inner } => {
                inner.validate()?;
                finite("offset", *offset)?;
                finite("factor", *factor)?;
            }
        }
        if matches!(self.kind, WeightKind::ExpDecay { .. } | WeightKind::PowerTail { .. } | WeightKind::Logistic { .. }) {
            self.check_monotone(DEFAULT_WINDOW.0, DEFAULT_WINDOW.1)?;
        }
        Ok(())
    }

    /// Sampled monotonicity on `SAMPLE_POINTS` points of `[lo, hi]`.
    pub fn check_monotone(&self, lo: f64, hi: f64) -> Result<()> {
        let dir = self.direction();
        let xs = linspace(lo, hi, SAMPLE_POINTS);
        let mut prev = self.eval(xs[0])?;
        for &x in &xs[1..] {
            let v = self.eval(x)?;
            let slack = 1e-12 * (1.0 + v.abs().max(prev.abs()));
            let bad = match dir {
                Direction::Nonincreasing => v > prev + slack,
                Direction::Nondecreasing => v < prev - slack,
                Direction::Constant => (v - prev).abs() > slack,
            };
            if bad {
                return Err(Error::InvalidWeight(format!("monotonicity ({dir:?}) violated near λ = {x}")));
            }
            prev = v;
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match &self.kind {
            WeightKind::Threshold { lambda0, side } => match side {
                Sign::Minus => (x <= *lambda0) as u8 as f64,
                Sign::Plus => (x >= *lambda0) as u8 as f64,
            },
            WeightKind::Step { thresholds, levels } => {
                let k = thresholds.partition_point(|&t| t < x);
                if k < thresholds.len() && thresholds[k] == x {
                    levels[k].max(levels[k + 1])
                } else {
                    levels[k]
                }
            }
            WeightKind::Constant { value } => *value,
            WeightKind::ExpDecay { t } => (-t * x).exp(),
            WeightKind::PowerTail { center, exponent } => {
                if x <= *center {
                    1.0
                } else {
                    (1.0 + x - center).powf(-exponent)
                }
            }
            WeightKind::Logistic { center, width } => logistic((x - center) / width),
            WeightKind::Resolvent { inner, shift, exponent } => {
                if !(x + shift > 0.0) {
                    return Err(Error::WeightUndefined { lo: x, hi: x });
                }
                inner.eval(x)? * (x + shift).powi(-(*exponent as i32))
            }
            WeightKind::Affine { offset, factor, inner } => offset + factor * inner.eval(x)?,
        })
    }

    /// Jumps and kinks of the weight, sorted.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts = match &self.kind {
            WeightKind::Threshold { lambda0, .. } => vec![*lambda0],
            WeightKind::Step { thresholds, .. } => thresholds.clone(),
            WeightKind::PowerTail { center, .. } => vec![*center],
            WeightKind::Resolvent { inner, .. } | WeightKind::Affine { inner, .. } => inner.singular_points(),
            _ => Vec::new(),
        };
        pts.sort_by(f64::total_cmp);
        pts
    }

    /// Points where the weight jumps; a subset of [`Weight::singular_points`].
    pub fn jump_points(&self) -> Vec<f64> {
        match &self.kind {
            WeightKind::PowerTail { .. } => Vec::new(),
            _ => self.singular_points(),
        }
    }

    /// Thresholds and levels when the weight is piecewise constant.
    pub fn as_step(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.kind {
            WeightKind::Threshold { lambda0, side: Sign::Minus } => Some((vec![*lambda0], vec![1.0, 0.0])),
            WeightKind::Threshold { lambda0, side: Sign::Plus } => Some((vec![*lambda0], vec![0.0, 1.0])),
            WeightKind::Step { thresholds, levels } => Some((thresholds.clone(), levels.clone())),
            WeightKind::Constant { value } => Some((Vec::new(), vec![*value])),
            WeightKind::ExpDecay { t } if *t == 0.0 => Some((Vec::new(), vec![1.0])),
            WeightKind::Affine { offset, factor, inner } => {
                let (t, l) = inner.as_step()?;
                Some((t, l.into_iter().map(|x| offset + factor * x).collect()))
            }
            _ => None,
        }
    }

    /// `∫_lo^hi f`, in closed form where available and by adaptive
    /// Gauss–Legendre (absolute tolerance `1e-10` per interval) otherwise.
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo == hi {
            return Ok(0.0);
        }
        if lo > hi {
            return Ok(-self.integral(hi, lo)?);
        }
        if let Some((thresholds, levels)) = self.as_step() {
            return Ok(step_integral(&thresholds, &levels, lo, hi, |a, b| b - a));
        }
        match &self.kind {
            WeightKind::ExpDecay { t } => {
                // exp(-t lo) (1 - exp(-t (hi - lo))) / t
                Ok(-(-t * lo).exp() * (-t * (hi - lo)).exp_m1() / t)
            }
            WeightKind::PowerTail { center, exponent } => {
                let flat = (hi.min(*center) - lo).max(0.0);
                let tail = |x: f64| -> f64 {
                    let u = 1.0 + (x - center).max(0.0);
                    if (exponent - 1.0).abs() < 1e-15 {
                        u.ln()
                    } else {
                        (u.powf(1.0 - exponent) - 1.0) / (1.0 - exponent)
                    }
                };
                Ok(flat + tail(hi) - tail(lo))
            }
            WeightKind::Logistic { center, width } => {
                let prim = |x: f64| x - width * softplus((x - center) / width);
                Ok(prim(hi) - prim(lo))
            }
            WeightKind::Resolvent { inner, shift, exponent } => {
                if !(lo + shift > 0.0) {
                    return Err(Error::WeightUndefined { lo, hi });
                }
                let k = *exponent as i32;
                if let Some((thresholds, levels)) = inner.as_step() {
                    let prim = move |x: f64| -> f64 {
                        if k == 1 {
                            (x + shift).ln()
                        } else {
                            (x + shift).powi(1 - k) / (1 - k) as f64
                        }
                    };
                    return Ok(step_integral(&thresholds, &levels, lo, hi, |a, b| prim(b) - prim(a)));
                }
                self.quadrature(lo, hi)
            }
            WeightKind::Affine { offset, factor, inner } => Ok(offset * (hi - lo) + factor * inner.integral(lo, hi)?),
            _ => self.quadrature(lo, hi),
        }
    }

    fn quadrature(&self, lo: f64, hi: f64) -> Result<f64> {
        let splits = self.singular_points();
        quadrature::adaptive_split(|x| self.eval(x), lo, hi, &splits, 1e-10, 40)
            .map(|e| e.value)
            .map_err(|e| match e {
                Error::QuadratureNonConvergence { .. } => Error::WeightUndefined { lo, hi },
                other => other,
            })
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("{name} must be finite")))
    }
}

/// `Σ level · measure(piece ∩ [lo, hi])` for a step weight.
fn step_integral<M: Fn(f64, f64) -> f64>(thresholds: &[f64], levels: &[f64], lo: f64, hi: f64, measure: M) -> f64 {
    let mut acc = 0.0;
    let mut start = lo;
    for (k, &level) in levels.iter().enumerate() {
        let end = thresholds.get(k).copied().unwrap_or(f64::INFINITY).min(hi);
        if end > start {
            if level != 0.0 {
                acc += level * measure(start, end);
            }
            start = end;
        }
        if start >= hi {
            break;
        }
    }
    acc
}

fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|k| if k + 1 == n { hi } else { lo + h * k as f64 }).collect()
}

/// `χ_{(-∞, λ0]}` for `Minus`, `χ_{[λ0, ∞)}` for `Plus`.
pub fn make_threshold_weight(lambda0: f64, sign: Sign) -> Weight {
    Weight::threshold(lambda0, sign)
}

/// Exponent `q`: `1` for `p = 1`, otherwise the smallest odd integer strictly
/// larger than `p`.
pub fn q_of(p: f64) -> Result<u32> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::OutOfRange { name: "p", detail: format!("{p} < 1") });
    }
    if p == 1.0 {
        return Ok(1);
    }
    let mut q = p.floor() as u32 + 1;
    if q % 2 == 0 {
        q += 1;
    }
    Ok(q)
}

/// `f(λ) · (λ + a)^{-exponent}` for nonnegative nonincreasing `f`.
pub fn resolvent_weight(f: &Weight, shift: f64, exponent: u32) -> Result<Weight> {
    if exponent < 2 {
        return Err(Error::OutOfRange { name: "exponent", detail: format!("{exponent} < 2") });
    }
    Weight::new(WeightKind::Resolvent { inner: Box::new(f.clone()), shift, exponent })
}

/// `max (1 + |λ|)^{q+1} |f(λ)|` over `count` equispaced points of `[lo, hi]`.
pub fn decay_check(f: &Weight, q: u32, lo: f64, hi: f64, count: usize) -> Result<f64> {
    let mut best = 0.0_f64;
    for x in linspace(lo, hi, count.max(2)) {
        best = best.max((1.0 + x.abs()).powi(q as i32 + 1) * f.eval(x)?.abs());
    }
    Ok(best)
}
