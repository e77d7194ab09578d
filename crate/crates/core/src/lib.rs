//! Exact mode-entanglement analysis and quantum Fisher information for `N`
//! fermions in `M` modes.
//!
//! * [`fock`]: basis enumeration, signed ladder operators, operator matrices.
//! * [`bipartition`]: `(m, M-m)` mode splits, sector labels and the block
//!   embedding into `C^{D_k} ⊗ C^{D'_{N-k}}`.
//! * [`operators`]: collective `J` operators, quadratic Hamiltonians, the
//!   pairwise Bogolubov rotation and projector-sandwiched local flips.
//! * [`entanglement`]: odd-odd witness, pure-state test, block
//!   decomposition, partial transpose, negativity, classification and
//!   robustness.
//! * [`metrology`]: phase evolution, symmetric logarithmic derivative,
//!   Fisher information and the interferometer scenarios.

pub mod bipartition;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod metrology;
pub mod operators;
pub mod random;
pub mod tolerance;

pub use error::{FermiError, Result};
