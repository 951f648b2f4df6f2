//! Oracles for the acceptance suite, built without the library's
//! eigensolver: cyclic Jacobi on real symmetric matrices, with complex
//! Hermitian input handled through the real `2n × 2n` embedding.

#![allow(dead_code)]

use nalgebra::DMatrix;
use ssf_lab_core::HermitianOperator;

/// Eigenvalues (ascending) and eigenvectors (columns) of a real symmetric
/// matrix by cyclic Jacobi rotations.
pub fn jacobi(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    // column-major: entry (r, c) at r + c * n
    let mut a = m.as_slice().to_vec();
    let mut v = DMatrix::<f64>::identity(n, n).as_slice().to_vec();
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..64 {
        let off: f64 = (0..n).flat_map(|c| (0..n).filter(move |&r| r != c).map(move |r| r + c * n)).map(|i| a[i] * a[i]).sum();
        if off <= 1e-32 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p + q * n];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q + q * n] - a[p + p * n]) / (2.0 * apq);
                let t = if theta >= 0.0 { 1.0 } else { -1.0 } / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in (0..n).filter(|&k| k != p && k != q) {
                    let (akp, akq) = (a[k + p * n], a[k + q * n]);
                    let (x, y) = (c * akp - s * akq, s * akp + c * akq);
                    a[k + p * n] = x;
                    a[k + q * n] = y;
                    a[p + k * n] = x;
                    a[q + k * n] = y;
                }
                a[p + p * n] -= t * apq;
                a[q + q * n] += t * apq;
                a[p + q * n] = 0.0;
                a[q + p * n] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k + p * n], v[k + q * n]);
                    v[k + p * n] = c * vkp - s * vkq;
                    v[k + q * n] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i + i * n].total_cmp(&a[j + j * n]));
    let values = order.iter().map(|&i| a[i + i * n]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[r + order[c] * n]);
    (values, vectors)
}

pub fn real_part(h: &HermitianOperator) -> DMatrix<f64> {
    h.entries().map(|z| z.re)
}

/// Ascending eigenvalues of a Hermitian operator.
pub fn eigs(h: &HermitianOperator) -> Vec<f64> {
    if h.is_real() {
        return jacobi(real_part(h)).0;
    }
    // [[X, -Y], [Y, X]] repeats every eigenvalue of X + iY twice
    let n = h.dim();
    let m = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h.entries()[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    jacobi(m).0.into_iter().step_by(2).collect()
}

pub fn real(m: DMatrix<f64>) -> HermitianOperator {
    HermitianOperator::from_real(m).unwrap()
}

/// `U f(Λ) Uᵀ` for a real symmetric operator.
pub fn real_function(h: &HermitianOperator, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    assert!(h.is_real());
    let (vals, u) = jacobi(real_part(h));
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(vals.len(), vals.iter().map(|&l| f(l))));
    &u * d * u.transpose()
}

/// `#{μ ≤ λ} − #{ν ≤ λ}` for spectra `mu` of A0 and `nu` of A.
pub fn xi_at(nu: &[f64], mu: &[f64], lambda: f64) -> f64 {
    mu.iter().filter(|&&x| x <= lambda).count() as f64 - nu.iter().filter(|&&x| x <= lambda).count() as f64
}

/// `∫_{-∞}^{λ0} ξ = Σ(λ0 − μ)_+ − Σ(λ0 − ν)_+`.
pub fn g_threshold_minus(nu: &[f64], mu: &[f64], lambda0: f64) -> f64 {
    let hinge = |s: &[f64]| s.iter().map(|&x| (lambda0 - x).max(0.0)).sum::<f64>();
    hinge(mu) - hinge(nu)
}

/// `∫_{λ0}^{∞} ξ = Σ(ν − λ0)_+ − Σ(μ − λ0)_+`.
pub fn g_threshold_plus(nu: &[f64], mu: &[f64], lambda0: f64) -> f64 {
    let hinge = |s: &[f64]| s.iter().map(|&x| (x - lambda0).max(0.0)).sum::<f64>();
    hinge(nu) - hinge(mu)
}

/// `∫ |ξ1 − ξ2| |λ|^k` for two pairs of spectra, exact on the merged grid.
pub fn l1_between(pair1: (&[f64], &[f64]), pair2: (&[f64], &[f64]), k: i32) -> f64 {
    let mut pts: Vec<f64> = pair1.0.iter().chain(pair1.1).chain(pair2.0).chain(pair2.1).copied().collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let prim = |x: f64| x.signum() * x.abs().powi(k + 1) / (k + 1) as f64;
    pts.windows(2)
        .map(|w| {
            let m = 0.5 * (w[0] + w[1]);
            let d = xi_at(pair1.0, pair1.1, m) - xi_at(pair2.0, pair2.1, m);
            d.abs() * (prim(w[1]) - prim(w[0]))
        })
        .sum()
}

/// Worst margin over a family of conditions; passes when every condition
/// holds.
pub struct Tally {
    pub count: usize,
    worst: f64,
    at: String,
}

impl Default for Tally {
    fn default() -> Self {
        Self { count: 0, worst: f64::NEG_INFINITY, at: String::new() }
    }
}

impl Tally {
    fn record(&mut self, ratio: f64, at: impl FnOnce() -> String) {
        let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
        if ratio > self.worst {
            self.worst = ratio;
            self.at = at();
        }
        self.count += 1;
    }

    /// `gap ≥ −tol`.
    pub fn at_least(&mut self, gap: f64, tol: f64, at: impl FnOnce() -> String) {
        self.record(-gap / tol, at);
    }

    /// `value ≤ tol` for a nonnegative value.
    pub fn at_most(&mut self, value: f64, tol: f64, at: impl FnOnce() -> String) {
        self.record(value / tol, at);
    }

    pub fn report(&mut self, r: &ssf_lab_core::PropertyReport, at: impl FnOnce() -> String) {
        use ssf_lab_core::properties::Sidedness;
        let ratio = match r.sidedness {
            Sidedness::OneSided => -r.worst_gap / r.tolerance,
            Sidedness::Identity => r.worst_gap.abs() / r.tolerance,
        };
        let summary = r.summary();
        self.record(if r.pass { ratio.min(1.0) } else { ratio.max(1.0 + f64::EPSILON) }, || format!("{} [{summary}]", at()));
    }

    pub fn pass(&self) -> bool {
        self.count > 0 && self.worst <= 1.0
    }

    pub fn summary(&self) -> String {
        format!("{} checks, worst gap/tolerance {:.3e} at {}", self.count, self.worst, self.at)
    }

    pub fn into_result(self) -> Result<String, String> {
        if self.pass() {
            Ok(self.summary())
        } else {
            Err(self.summary())
        }
    }
}

pub fn merge(tallies: Vec<(&str, Tally)>) -> Result<String, String> {
    let pass = tallies.iter().all(|t| t.1.pass());
    let text = tallies.iter().map(|(name, t)| format!("{name}: {}", t.summary())).collect::<Vec<_>>().join("; ");
    if pass {
        Ok(text)
    } else {
        Err(text)
    }
}
