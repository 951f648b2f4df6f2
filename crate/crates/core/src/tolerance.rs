//! Tolerances shared by the computations and the property checks.

/// Relative tolerance for one-sided inequalities (concavity, subadditivity).
pub const ONE_SIDED: f64 = 1e-8;

/// Relative tolerance for identities that hold exactly in finite dimension.
pub const EXACT: f64 = 1e-10;

/// Absolute floor for identities mediated by numerical quadrature.
pub const QUADRATURE_FLOOR: f64 = 1e-6;

/// Breakpoints closer than `MERGE * (1 + max|b|)` are identified.
pub const MERGE: f64 = 1e-12;

/// Imaginary residue allowed on traces of Hermitian products, relative.
pub const IMAGINARY: f64 = 1e-12;

/// `rel * (1 + scale)`.
pub fn relative(rel: f64, scale: f64) -> f64 {
    rel * (1.0 + scale.abs())
}
