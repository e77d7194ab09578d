//! Fixed-particle-number fermionic Fock spaces, signed ladder action and
//! dense operator matrices.
//!
//! Basis vectors follow `|n_1, ..., n_M⟩ = (a†_1)^{n_1} ... (a†_M)^{n_M} |0⟩`,
//! so a ladder operator on mode `i` picks up `(-1)^{n_1 + ... + n_{i-1}}`.

mod basis;
mod ladder;
mod operator;
mod state;

pub use basis::{binomial, FockSpace, OccupationState, DEFAULT_DIM_CAP, MAX_MODES};
pub use ladder::{Ladder, LadderMonomial, OperatorExpr};
pub use operator::{apply_expr, apply_ladder, operator_matrix, transition_matrix, OperatorMatrix};
pub use state::{DensityMatrix, StateVector};
