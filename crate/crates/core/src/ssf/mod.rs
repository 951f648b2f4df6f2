//! Spectral shift function, counting functions and eigenvalue sums.
//!
//! In finite dimension the spectral shift function of `(A, A0)` is the
//! integer step function `ξ(λ) = N(λ; A0) − N(λ; A)`, with `N(λ; X)` the
//! number of eigenvalues of `X` not exceeding `λ`. Everything here is exact
//! up to the eigenvalues themselves.

mod step;

pub use step::{abs_monomial_integral, StepFunction};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eigenvalues, resolvent_power, HermitianOperator, Spectrum};
use crate::weights::Weight;

/// Side of a threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// Eigenvalues at or below the threshold; integrals from `-∞`.
    Minus,
    /// Eigenvalues at or above the threshold; integrals to `+∞`.
    Plus,
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" | "-" => Ok(Sign::Minus),
            "plus" | "+" => Ok(Sign::Plus),
            other => Err(Error::OutOfRange { name: "sign", detail: format!("unknown sign `{other}`") }),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        })
    }
}

/// `N^(-)(λ) = #{λ_j ≤ λ}` or `N^(+)(λ) = #{λ_j ≥ λ}`.
pub fn counting_function(spec: &Spectrum, lambda: f64, sign: Sign) -> usize {
    let v = spec.values();
    match sign {
        Sign::Minus => v.partition_point(|&x| x <= lambda),
        Sign::Plus => v.len() - v.partition_point(|&x| x < lambda),
    }
}

/// `S^(-)_λ = Σ_{λ_j ≤ λ} (λ_j − λ)` or `S^(+)_λ = Σ_{λ_j ≥ λ} (λ_j − λ)`.
pub fn eigenvalue_sum(spec: &Spectrum, lambda: f64, sign: Sign) -> f64 {
    let v = spec.values();
    match sign {
        Sign::Minus => v.iter().filter(|&&x| x <= lambda).map(|&x| x - lambda).fold(0.0, |acc, x| acc + x),
        Sign::Plus => v.iter().filter(|&&x| x >= lambda).map(|&x| x - lambda).fold(0.0, |acc, x| acc + x),
    }
}

/// ξ from two spectra: `+1` jumps at eigenvalues of `A0`, `-1` at those of `A`.
pub fn ssf_from_spectra(spec_a: &Spectrum, spec_a0: &Spectrum) -> Result<StepFunction> {
    if spec_a.len() != spec_a0.len() {
        return Err(Error::DimensionMismatch { expected: spec_a0.len(), got: spec_a.len() });
    }
    let events = spec_a0
        .values()
        .iter()
        .map(|&x| (x, 1))
        .chain(spec_a.values().iter().map(|&x| (x, -1)))
        .collect();
    StepFunction::from_jumps(events)
}

/// Spectral shift function `ξ(·; A, A0)`, right-continuous representative.
pub fn ssf(a: &HermitianOperator, a0: &HermitianOperator) -> Result<StepFunction> {
    a.check_same_dim(a0)?;
    ssf_from_spectra(&eigenvalues(a), &eigenvalues(a0))
}

/// `ζ^(-)(λ) = ∫_{-∞}^{λ} ξ` or `ζ^(+)(λ) = ∫_{λ}^{∞} ξ`.
pub fn integrated_ssf(xi: &StepFunction, lambda: f64, sign: Sign) -> f64 {
    match sign {
        Sign::Minus => xi.integral_below(lambda),
        Sign::Plus => xi.integral_above(lambda),
    }
}

/// `∫ w ξ dλ`, interval by interval.
pub fn integrate_step_against(xi: &StepFunction, w: &Weight) -> Result<f64> {
    let mut acc = 0.0;
    for (lo, hi, v) in xi.intervals() {
        if v != 0.0 {
            acc += v * w.integral(lo, hi)?;
        }
    }
    Ok(acc)
}

/// ξ computed from the resolvent-power pair `((A+a)^{-p}, (A0+a)^{-p})` and
/// pulled back through `t ↦ t^{-1/p} − a`, with the sign flipped because the
/// map is decreasing.
pub fn ssf_via_invariance(a: &HermitianOperator, a0: &HermitianOperator, shift: f64, p: f64) -> Result<StepFunction> {
    a.check_same_dim(a0)?;
    let min = eigenvalues(a).min().min(eigenvalues(a0).min());
    if !(shift > -min) {
        return Err(Error::ShiftTooSmall { shift, min_spectrum: min });
    }
    let r = resolvent_power(a, shift, p)?;
    let r0 = resolvent_power(a0, shift, p)?;
    let xi_t = ssf(&r, &r0)?;
    if xi_t.is_zero() {
        return Ok(StepFunction::zero());
    }
    // crossing t_k downwards in t means crossing λ_k upwards; with the sign
    // flip the jump of ξ at λ_k equals the jump of ξ_t at t_k
    let mut events = Vec::with_capacity(xi_t.breakpoints().len());
    let mut before = 0.0;
    for (k, &t) in xi_t.breakpoints().iter().enumerate() {
        if !(t > 0.0) {
            return Err(Error::Numerical(format!("resolvent eigenvalue {t:e} is not positive")));
        }
        let after = xi_t.values().get(k).copied().unwrap_or(0.0);
        events.push((t.powf(-1.0 / p) - shift, (after - before).round() as i64));
        before = after;
    }
    StepFunction::from_jumps(events)
}

/// `∫ |ξ1 − ξ2| |λ|^k dλ`, exact.
pub fn l1_distance(xi1: &StepFunction, xi2: &StepFunction, weight_exponent: u32) -> f64 {
    xi1.sub(xi2)
        .intervals()
        .map(|(lo, hi, v)| v.abs() * abs_monomial_integral(lo, hi, weight_exponent))
        .fold(0.0, |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{build_random_hermitian, Ensemble};

    fn d(v: &[f64]) -> HermitianOperator {
        HermitianOperator::diagonal(v).unwrap()
    }

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    /// Brute-force ξ on a grid: direct eigenvalue counts.
    fn counted(a: &Spectrum, a0: &Spectrum, lambda: f64) -> f64 {
        counting_function(a0, lambda, Sign::Minus) as f64 - counting_function(a, lambda, Sign::Minus) as f64
    }

    #[test]
    fn counting_examples() {
        let s = spec(&[-2.0, -1.0, 3.0]);
        assert_eq!(counting_function(&s, 0.0, Sign::Minus), 2);
        assert_eq!(counting_function(&s, 0.0, Sign::Plus), 1);
        assert_eq!(counting_function(&s, -4.0, Sign::Minus), 0);
        assert_eq!(counting_function(&s, 3.0, Sign::Plus), 1);
    }

    #[test]
    fn eigenvalue_sum_examples() {
        let s = spec(&[-2.0, -1.0, 3.0]);
        assert_eq!(eigenvalue_sum(&s, 0.0, Sign::Minus), -3.0);
        assert_eq!(eigenvalue_sum(&s, 0.0, Sign::Plus), 3.0);
        assert_eq!(eigenvalue_sum(&s, -5.0, Sign::Minus), 0.0);
    }

    #[test]
    fn eigenvalue_sum_equals_integrated_counting() {
        let s = spec(&[-2.0, -1.0, 0.5, 3.0]);
        for &l in &[-3.0_f64, -1.5, 0.0, 1.0, 4.0] {
            // S^- = -∫_{-∞}^λ N^-, S^+ = ∫_λ^∞ N^+, by midpoint sums on a fine grid
            let h = 1e-4;
            let lo = -10.0;
            let n = ((l - lo) / h).round() as usize;
            let minus: f64 = (0..n).map(|k| counting_function(&s, lo + (k as f64 + 0.5) * h, Sign::Minus) as f64 * h).sum();
            assert!((eigenvalue_sum(&s, l, Sign::Minus) + minus).abs() < 1e-6);
            let hi = 10.0;
            let n = ((hi - l) / h).round() as usize;
            let plus: f64 = (0..n).map(|k| counting_function(&s, l + (k as f64 + 0.5) * h, Sign::Plus) as f64 * h).sum();
            assert!((eigenvalue_sum(&s, l, Sign::Plus) - plus).abs() < 1e-6);
        }
    }

    #[test]
    fn ssf_two_by_two() {
        let xi = ssf(&d(&[-1.0, 1.0]), &d(&[0.0, 0.0])).unwrap();
        assert_eq!(xi.breakpoints(), &[-1.0, 0.0, 1.0]);
        assert_eq!(xi.values(), &[-1.0, 1.0]);
        let (sa, sa0) = (spec(&[-1.0, 1.0]), spec(&[0.0, 0.0]));
        for k in 0..400 {
            let l = -2.0 + 0.01 * k as f64 + 0.003;
            assert_eq!(xi.eval(l), counted(&sa, &sa0, l));
        }
    }

    #[test]
    fn ssf_identical_pair_is_zero() {
        let a = build_random_hermitian(6, Ensemble::Gue, 2, 1.0).unwrap();
        assert!(ssf(&a, &a).unwrap().is_zero());
    }

    #[test]
    fn ssf_scalar_pair() {
        let xi = ssf(&d(&[2.5]), &d(&[0.0])).unwrap();
        assert_eq!(xi, StepFunction::interval(0.0, 2.5, 1.0).unwrap());
        assert!(ssf(&d(&[1.0]), &d(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn ssf_matches_grid_count_on_random_pairs() {
        for seed in 0..5 {
            let a0 = build_random_hermitian(7, Ensemble::Goe, seed, 1.0).unwrap();
            let v = build_random_hermitian(7, Ensemble::Gue, 100 + seed, 1.0).unwrap();
            let a = &a0 + &v;
            let xi = ssf(&a, &a0).unwrap();
            let (sa, sa0) = (eigenvalues(&a), eigenvalues(&a0));
            for k in 0..2000 {
                let l = -5.0 + 0.005 * k as f64 + 1.234e-4;
                assert_eq!(xi.eval(l), counted(&sa, &sa0, l));
            }
            assert!(xi.sup_abs() <= 7.0);
            assert!((xi.integral() - v.trace()).abs() <= 1e-10 * (1.0 + v.trace().abs()));
        }
    }

    #[test]
    fn rank_one_ssf_takes_values_in_unit_set() {
        let a0 = build_random_hermitian(9, Ensemble::Goe, 4, 1.0).unwrap();
        let mut e = vec![0.0; 9];
        e[3] = 1.3;
        e[5] = -0.4;
        let v = HermitianOperator::from_rows(&(0..9).map(|i| (0..9).map(|j| e[i] * e[j]).collect()).collect::<Vec<_>>()).unwrap();
        let xi = ssf(&(&a0 + &v), &a0).unwrap();
        assert!(xi.values().iter().all(|&x| x == 0.0 || x == 1.0 || x == -1.0));
    }

    #[test]
    fn integrated_ssf_examples() {
        let xi = ssf(&d(&[-1.0, 1.0]), &d(&[0.0, 0.0])).unwrap();
        assert_eq!(integrated_ssf(&xi, 0.0, Sign::Minus), -1.0);
        assert_eq!(integrated_ssf(&xi, f64::INFINITY, Sign::Minus), 0.0);
        assert_eq!(integrated_ssf(&xi, f64::NEG_INFINITY, Sign::Plus), 0.0);
        let zero = StepFunction::zero();
        assert_eq!(integrated_ssf(&zero, 0.3, Sign::Plus), 0.0);
    }

    #[test]
    fn invariance_scalar_example() {
        let xi = ssf_via_invariance(&d(&[1.0]), &d(&[0.0]), 1.0, 1.0).unwrap();
        let direct = StepFunction::interval(0.0, 1.0, 1.0).unwrap();
        assert!(l1_distance(&xi, &direct, 0) < 1e-14);
        assert!(ssf_via_invariance(&d(&[2.0, 3.0]), &d(&[2.0, 3.0]), 1.0, 2.0).unwrap().is_zero());
    }

    #[test]
    fn invariance_random_pair() {
        let a0 = build_random_hermitian(8, Ensemble::Goe, 21, 1.0).unwrap();
        let a = &a0 + &build_random_hermitian(8, Ensemble::Goe, 22, 1.0).unwrap();
        let min = eigenvalues(&a).min().min(eigenvalues(&a0).min());
        let shift = 1.0 + min.abs();
        let via = ssf_via_invariance(&a, &a0, shift, 2.0).unwrap();
        assert!(l1_distance(&via, &ssf(&a, &a0).unwrap(), 0) <= 1e-8);
    }

    #[test]
    fn invariance_rejects_small_shift() {
        assert!(matches!(ssf_via_invariance(&d(&[-2.0]), &d(&[0.0]), 1.0, 1.0), Err(Error::ShiftTooSmall { .. })));
    }

    #[test]
    fn l1_examples() {
        let one = StepFunction::interval(0.0, 1.0, 1.0).unwrap();
        assert_eq!(l1_distance(&one, &one, 0), 0.0);
        assert!((l1_distance(&one, &StepFunction::zero(), 0) - 1.0).abs() < 1e-16);
        assert!((l1_distance(&one, &StepFunction::zero(), 2) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn threshold_weight_gives_integrated_ssf() {
        let xi = ssf(&d(&[-1.0, 1.0]), &d(&[0.0, 0.0])).unwrap();
        let w = Weight::threshold(0.0, Sign::Minus);
        assert_eq!(integrate_step_against(&xi, &w).unwrap(), -1.0);
        assert_eq!(integrate_step_against(&StepFunction::zero(), &w).unwrap(), 0.0);
        let one = Weight::constant(1.0);
        assert_eq!(integrate_step_against(&xi, &one).unwrap(), 0.0);
    }
}
