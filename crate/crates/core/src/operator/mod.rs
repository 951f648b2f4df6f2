//! Finite-dimensional self-adjoint operators.
//!
//! [`HermitianOperator`] is the value type for every operator that enters a
//! spectral computation: the unperturbed operator, the perturbation, their
//! sum, resolvent powers and projections. Values are immutable; all algebra
//! returns new operators.

mod builders;
mod decomp;
mod family;

pub use builders::{build_discrete_schrodinger, build_random_hermitian, derive_seed, Ensemble};
pub use decomp::{eigendecompose, eigenvalues, SpectralDecomposition, Spectrum};
pub use family::CouplingFamily;

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

pub use nalgebra::Complex;

/// Complex scalar used for operator entries.
pub type C64 = Complex<f64>;

/// Dense self-adjoint matrix.
///
/// Construction symmetrizes the input as `(M + M*)/2` and records how far the
/// input was from Hermitian in [`HermitianOperator::asymmetry`].
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    entries: DMatrix<C64>,
    asymmetry: f64,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl HermitianOperator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let n = matrix.nrows();
        let mut asymmetry = 0.0_f64;
        let mut entries = matrix.clone();
        for i in 0..n {
            for j in 0..n {
                let a = matrix[(i, j)];
                let b = matrix[(j, i)].conj();
                asymmetry = asymmetry.max((a - b).norm());
                // (a + b) / 2 evaluated identically for (i, j) and (j, i)
                entries[(i, j)] = C64::new((a.re + b.re) * 0.5, (a.im + b.im) * 0.5);
            }
        }
        Ok(Self { entries, asymmetry })
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| C64::new(x, 0.0)))
    }

    /// Builds a real operator from row slices.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must all have length equal to the row count".into()));
        }
        Self::from_real(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_real(DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self { entries: DMatrix::zeros(dim, dim), asymmetry: 0.0 }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self { entries: DMatrix::identity(dim, dim), asymmetry: 0.0 }
    }

    /// `c * I`.
    pub fn scalar(dim: usize, c: f64) -> Self {
        Self::identity(dim).scale(c)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    /// Largest `|M_ij - conj(M_ji)|` of the matrix this operator was built from.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    /// `max |entry|`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).fold(0.0, |acc, x| acc + x)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { entries: self.entries.map(|z| z * c), asymmetry: 0.0 }
    }

    /// Conjugation `X M X*`, symmetrized.
    pub fn congruence(&self, x: &DMatrix<C64>) -> Result<Self> {
        if x.ncols() != self.dim() || x.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.ncols() });
        }
        Self::new(x * &self.entries * x.adjoint())
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self { entries: &self.entries + &other.entries, asymmetry: 0.0 })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self { entries: &self.entries - &other.entries, asymmetry: 0.0 })
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        eigenvalues(self).min()
    }

    /// Tolerance below which a negative `psd_gap` is treated as roundoff.
    pub fn psd_tolerance(&self) -> f64 {
        tolerance::EXACT * (1.0 + self.max_abs())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        self.try_sub(rhs).expect("operator dimensions differ")
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;

    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;

    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

/// `U diag(F(λ_j)) U*` for the spectral decomposition of `a`.
pub fn apply_function<F>(a: &HermitianOperator, f: F) -> Result<HermitianOperator>
where
    F: Fn(f64) -> f64,
{
    let decomp = eigendecompose(a)?;
    decomp.map_spectrum(f)
}

/// `(A + a)^{-p}`.
pub fn resolvent_power(a: &HermitianOperator, shift: f64, p: f64) -> Result<HermitianOperator> {
    if !(p >= 1.0) {
        return Err(Error::OutOfRange { name: "p", detail: format!("{p} < 1") });
    }
    let decomp = eigendecompose(a)?;
    let min = decomp.eigenvalues.min();
    if !(shift > -min) {
        return Err(Error::ShiftTooSmall { shift, min_spectrum: min });
    }
    decomp.map_spectrum(|l| (l + shift).powf(-p))
}

/// Trace norm `||A - B||_1`, the sum of `|eigenvalues|` of the difference.
pub fn trace_norm_diff(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    let diff = a.try_sub(b)?;
    Ok(eigenvalues(&diff).values().iter().map(|x| x.abs()).fold(0.0, |acc, x| acc + x))
}

/// Compression `P_n W P_n` onto the span of the first `n` basis vectors.
pub fn compress_by_projection(w: &HermitianOperator, n: usize) -> Result<HermitianOperator> {
    let dim = w.dim();
    if n > dim {
        return Err(Error::OutOfRange { name: "n", detail: format!("{n} > dim {dim}") });
    }
    let mut entries = w.entries.clone();
    for i in 0..dim {
        for j in 0..dim {
            if i >= n || j >= n {
                entries[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(HermitianOperator { entries, asymmetry: 0.0 })
}

/// Minimum eigenvalue; `A ⪰ 0` iff this is `>= -A.psd_tolerance()`.
pub fn psd_gap(a: &HermitianOperator) -> f64 {
    a.min_eigenvalue()
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    entries_re: Vec<f64>,
    entries_im: Vec<f64>,
}

impl Serialize for HermitianOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let mut entries_re = Vec::with_capacity(n * n);
        let mut entries_im = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries_re.push(self.entries[(i, j)].re);
                entries_im.push(self.entries[(i, j)].im);
            }
        }
        MatrixJson { dim: n, entries_re, entries_im }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(deserializer)?;
        let n = raw.dim;
        if raw.entries_re.len() != n * n || raw.entries_im.len() != n * n {
            return Err(D::Error::custom(format!("expected {} entries for dim {}", n * n, n)));
        }
        let m = DMatrix::from_fn(n, n, |i, j| C64::new(raw.entries_re[i * n + j], raw.entries_im[i * n + j]));
        HermitianOperator::new(m).map_err(D::Error::custom)
    }
}
