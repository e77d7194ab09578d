//! Default numerical thresholds.

/// `|‖ψ‖² - 1|` allowed for a normalized state.
pub const NORM: f64 = 1e-12;
/// `‖ρ - ρ†‖_max` allowed for a density matrix.
pub const HERMITIAN: f64 = 1e-12;
/// `|Tr ρ - 1|` allowed for a density matrix.
pub const TRACE: f64 = 1e-12;
/// Most negative eigenvalue tolerated in a density matrix.
pub const PSD: f64 = 1e-10;
/// Rank, purity and negativity threshold.
pub const RANK: f64 = 1e-10;
/// `‖η‖_max` above which a state counts as not block diagonal.
pub const OFF_DIAGONAL: f64 = 1e-12;
/// Sector weights below this are treated as empty.
pub const EMPTY_BLOCK: f64 = 1e-14;
/// Odd-odd witness firing threshold.
pub const WITNESS: f64 = 1e-10;
/// Eigenvalue-pair cutoff `r_i + r_j > ε` in the Fisher information sum.
pub const QFI_PAIR: f64 = 1e-12;
/// Mixture weights must sum to one within this.
pub const MIXTURE_WEIGHTS: f64 = 1e-9;
