//! Spectral shift functions and eigenvalue functionals for pairs of
//! finite-dimensional self-adjoint operators.
//!
//! For a pair `(A, A0)` of Hermitian matrices the spectral shift function is
//! the step function `ξ(λ) = #{eig(A0) ≤ λ} − #{eig(A) ≤ λ}`. The crate
//! computes it exactly, integrates it against monotone weights, evaluates the
//! coupling-constant functionals built on it, and checks the concavity,
//! convexity, monotonicity and limit properties those functionals satisfy.
//!
//! Module map:
//! - [`operator`]: Hermitian operators, eigendecomposition, operator families.
//! - [`ssf`]: step functions, counting functions, eigenvalue sums, ξ and ζ.
//! - [`weights`]: monotone weights `f` and trace-test functions `F`.
//! - [`functionals`]: `g(V)`, coupling integrals, weighted and limit functionals.
//! - [`properties`]: property checks producing [`PropertyReport`]s.

pub mod error;
pub mod functionals;
pub mod operator;
pub mod properties;
pub mod quadrature;
pub mod ssf;
pub mod tolerance;
pub mod weights;

pub use error::{Error, Result};
pub use functionals::{CouplingCurve, FunctionalContext, QuadratureConfig, QuadratureEstimate};
pub use operator::{CouplingFamily, Ensemble, HermitianOperator, SpectralDecomposition, Spectrum};
pub use properties::PropertyReport;
pub use ssf::{Sign, StepFunction};
pub use weights::{TraceTestFunction, Weight};
