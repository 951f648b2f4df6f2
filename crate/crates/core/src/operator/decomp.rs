use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{HermitianOperator, C64};
use crate::error::{Error, Result};

/// Ascending real eigenvalues, repeated according to multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the input; rejects non-finite values.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite eigenvalue".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.0.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.0.last().copied().unwrap_or(f64::NAN)
    }
}

/// `A = U diag(λ) U*` with ascending `λ` and unitary `U`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Spectrum,
    pub eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(F(λ_j)) U*`.
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F) -> Result<HermitianOperator> {
        let n = self.dim();
        let mut mapped = Vec::with_capacity(n);
        for &l in self.eigenvalues.values() {
            let v = f(l);
            if !v.is_finite() {
                return Err(Error::FunctionUndefined { eigenvalue: l });
            }
            mapped.push(v);
        }
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in mapped.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        HermitianOperator::new(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map_spectrum(|l| l).expect("eigenvalues are finite")
    }

    /// `u_j* X u_j` for every eigenvector, in eigenvalue order.
    pub fn diagonal_elements(&self, x: &HermitianOperator) -> Vec<C64> {
        let u = &self.eigenvectors;
        let xu = x.entries() * u;
        (0..self.dim()).map(|j| u.column(j).dotc(&xu.column(j))).collect()
    }
}

fn fingerprint(a: &HermitianOperator) -> String {
    let frob: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    format!("dim={}, trace={:e}, frobenius={:e}, max_abs={:e}", a.dim(), a.trace(), frob, a.max_abs())
}

fn max_iterations(dim: usize) -> usize {
    1000 * dim.max(1)
}

/// Dense Hermitian eigendecomposition. Real inputs take the real solver.
pub fn eigendecompose(a: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let (values, vectors) = if a.is_real() {
        let m = a.entries().map(|z| z.re);
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, max_iterations(n))
            .ok_or_else(|| Error::EigenNonConvergence { fingerprint: fingerprint(a) })?;
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors.map(|x| C64::new(x, 0.0)))
    } else {
        let eig = SymmetricEigen::try_new(a.entries().clone(), f64::EPSILON, max_iterations(n))
            .ok_or_else(|| Error::EigenNonConvergence { fingerprint: fingerprint(a) })?;
        (eig.eigenvalues.as_slice().to_vec(), eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues: Spectrum::new(sorted)?, eigenvectors })
}

/// Eigenvalues only; cheaper than [`eigendecompose`].
pub fn eigenvalues(a: &HermitianOperator) -> Spectrum {
    let values = if a.is_real() {
        a.entries().map(|z| z.re).symmetric_eigenvalues().as_slice().to_vec()
    } else {
        a.entries().symmetric_eigenvalues().as_slice().to_vec()
    };
    // entries are finite by construction, so the QR iteration yields finite values
    Spectrum::new(values).expect("finite eigenvalues")
}
