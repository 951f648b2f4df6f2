use serde::{Deserialize, Serialize};

use super::{eigenvalues, HermitianOperator};
use crate::error::{Error, Result};

/// A one-parameter family of perturbations of a common base operator.
///
/// `Segment` is the convex hull `α V1 + (1-α) V2`, `α ∈ [0, 1]`.
/// `Path` is the operator-concave curve `B0 + α B1 - α² B2` with `B2 ⪰ 0`,
/// defined for `α` in `[lo, hi]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CouplingFamily {
    Segment {
        base: HermitianOperator,
        v1: HermitianOperator,
        v2: HermitianOperator,
    },
    Path {
        base: HermitianOperator,
        b0: HermitianOperator,
        b1: HermitianOperator,
        b2: HermitianOperator,
        lo: f64,
        hi: f64,
    },
}

impl CouplingFamily {
    pub fn segment(base: HermitianOperator, v1: HermitianOperator, v2: HermitianOperator) -> Result<Self> {
        base.check_same_dim(&v1)?;
        base.check_same_dim(&v2)?;
        Ok(CouplingFamily::Segment { base, v1, v2 })
    }

    /// Rejects `B2` with a negative eigenvalue below `-1e-10 * scale`.
    pub fn path(
        base: HermitianOperator,
        b0: HermitianOperator,
        b1: HermitianOperator,
        b2: HermitianOperator,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        for b in [&b0, &b1, &b2] {
            base.check_same_dim(b)?;
        }
        if !(lo < hi) {
            return Err(Error::OutOfRange { name: "interval", detail: format!("[{lo}, {hi}] is empty") });
        }
        let gap = eigenvalues(&b2).min();
        if gap < -b2.psd_tolerance() {
            return Err(Error::OutOfRange { name: "b2", detail: format!("not positive semidefinite (min eigenvalue {gap:e})") });
        }
        Ok(CouplingFamily::Path { base, b0, b1, b2, lo, hi })
    }

    pub fn base(&self) -> &HermitianOperator {
        match self {
            CouplingFamily::Segment { base, .. } | CouplingFamily::Path { base, .. } => base,
        }
    }

    pub fn dim(&self) -> usize {
        self.base().dim()
    }

    /// Parameter interval of the family.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            CouplingFamily::Segment { .. } => (0.0, 1.0),
            CouplingFamily::Path { lo, hi, .. } => (*lo, *hi),
        }
    }

    /// The perturbation `V(α)`.
    pub fn member(&self, alpha: f64) -> Result<HermitianOperator> {
        let (lo, hi) = self.domain();
        if !(alpha >= lo && alpha <= hi) {
            return Err(Error::OutOfRange { name: "alpha", detail: format!("{alpha} outside [{lo}, {hi}]") });
        }
        Ok(match self {
            CouplingFamily::Segment { v1, v2, .. } => &v1.scale(alpha) + &v2.scale(1.0 - alpha),
            CouplingFamily::Path { b0, b1, b2, .. } => &(b0 + &b1.scale(alpha)) - &b2.scale(alpha * alpha),
        })
    }

    /// Shift `a0 = 1 + max(0, -min spec)` over the base operator and the
    /// perturbed operators at both ends and the midpoint of the domain.
    ///
    /// The lowest eigenvalue of `A0 + V(α)` is concave in `α` for both family
    /// forms, so its minimum over the domain sits at an end point.
    pub fn shift_floor(&self) -> Result<f64> {
        let (lo, hi) = self.domain();
        let mut min = eigenvalues(self.base()).min();
        for alpha in [lo, 0.5 * (lo + hi), hi] {
            let a = self.base() + &self.member(alpha)?;
            min = min.min(eigenvalues(&a).min());
        }
        Ok(1.0 + (-min).max(0.0))
    }
}
