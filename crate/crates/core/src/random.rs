//! Seeded random states for sampling-based checks and the `mixed_random`
//! state kind.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use rand::SeedableRng;

use crate::fock::{DensityMatrix, FockSpace, StateVector};
use crate::linalg::{self, CMatrix, CVector};

pub type StateRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> CVector {
    CVector::from_fn(len, |_, _| gaussian_complex(rng))
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, space: &Arc<FockSpace>) -> StateVector {
    let v = gaussian_vector(rng, space.dim());
    StateVector::new(space.clone(), v)
        .and_then(|s| s.normalized())
        .expect("Gaussian vector has the space dimension and nonzero norm")
}

/// `G G† / Tr` with `G` a `D × rank` Ginibre matrix.
pub fn density_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    space: &Arc<FockSpace>,
    rank: usize,
) -> DensityMatrix {
    let g = ginibre(rng, space.dim(), rank.max(1));
    let w = &g * g.adjoint();
    let w = linalg::hermitian_part(&w);
    let tr = linalg::trace(&w).re;
    DensityMatrix::new_unchecked(space.clone(), w / Complex64::new(tr, 0.0))
        .expect("shape matches the space")
}

/// Haar-random unitary of size `n`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    linalg::unitary_from_qr(ginibre(rng, n, n))
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    linalg::hermitian_part(&ginibre(rng, n, n))
}
