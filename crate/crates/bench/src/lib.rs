//! Fixtures shared by the criterion benches.

use ssf_lab_core::operator::{build_random_hermitian, Ensemble};
use ssf_lab_core::HermitianOperator;

/// GOE reference operator and GUE perturbation of the given size.
pub fn pair(dim: usize, seed: u64) -> (HermitianOperator, HermitianOperator) {
    let a0 = build_random_hermitian(dim, Ensemble::Goe, seed, 1.0).expect("valid dimension");
    let v = build_random_hermitian(dim, Ensemble::Gue, seed.wrapping_add(1), 1.0).expect("valid dimension");
    (a0, v)
}
