use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{HermitianOperator, C64};
use crate::error::{Error, Result};

/// Random test-matrix ensembles.
///
/// GOE and GUE are scaled so off-diagonal entries have variance `scale²/dim`;
/// the diagonal ensemble draws i.i.d. `N(0, scale²)` eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Goe,
    Gue,
    Diagonal,
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "goe" => Ok(Ensemble::Goe),
            "gue" => Ok(Ensemble::Gue),
            "diagonal" => Ok(Ensemble::Diagonal),
            other => Err(Error::OutOfRange { name: "ensemble", detail: format!("unknown tag `{other}`") }),
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ensemble::Goe => "goe",
            Ensemble::Gue => "gue",
            Ensemble::Diagonal => "diagonal",
        })
    }
}

/// Dirichlet finite-difference Laplacian on `n` sites with unit spacing plus
/// a diagonal potential: `2 + v_i` on the diagonal, `-1` off it.
pub fn build_discrete_schrodinger(n: usize, potential: &[f64]) -> Result<HermitianOperator> {
    if n < 2 {
        return Err(Error::OutOfRange { name: "n", detail: format!("{n} < 2") });
    }
    if potential.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: potential.len() });
    }
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0 + potential[i]
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    });
    HermitianOperator::from_real(m)
}

/// Deterministic random Hermitian matrix for `(dim, ensemble, seed, scale)`.
pub fn build_random_hermitian(dim: usize, ensemble: Ensemble, seed: u64, scale: f64) -> Result<HermitianOperator> {
    if dim < 1 {
        return Err(Error::OutOfRange { name: "dim", detail: "must be at least 1".into() });
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::OutOfRange { name: "scale", detail: format!("{scale} must be positive") });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let m = match ensemble {
        Ensemble::Goe => {
            let sigma = (2.0 / dim as f64).sqrt() * scale;
            DMatrix::from_fn(dim, dim, |_, _| C64::new(sigma * normal(), 0.0))
        }
        Ensemble::Gue => {
            let sigma = (1.0 / dim as f64).sqrt() * scale;
            DMatrix::from_fn(dim, dim, |_, _| {
                let re = normal();
                let im = normal();
                C64::new(sigma * re, sigma * im)
            })
        }
        Ensemble::Diagonal => {
            let diag: Vec<f64> = (0..dim).map(|_| scale * normal()).collect();
            DMatrix::from_fn(dim, dim, |i, j| C64::new(if i == j { diag[i] } else { 0.0 }, 0.0))
        }
    };
    HermitianOperator::new(m)
}

/// Mixes a master seed with task indices into an independent stream seed.
///
/// Parallel sweeps seed each task from `(master, indices)` so results do not
/// depend on scheduling.
pub fn derive_seed(master: u64, indices: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    indices.iter().fold(splitmix(master), |acc, &i| splitmix(acc ^ splitmix(i.wrapping_add(0x632B_E59B_D9B4_E019))))
}
