use thiserror::Error;

/// Errors raised by Fock-space construction, operator assembly and the
/// entanglement / metrology routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermiError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("Hilbert space dimension {dim} exceeds the configured cap {cap}")]
    DimensionCapExceeded { dim: u128, cap: usize },

    #[error("mode {mode} is outside [1, {modes}]")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("monomial shifts particle number by {shift}, expected {expected}")]
    NumberNonconserving { shift: i64, expected: i64 },

    #[error("bipartition over {bipartition_modes} modes applied to a space with {space_modes} modes")]
    UnboundSpace {
        bipartition_modes: usize,
        space_modes: usize,
    },

    #[error("pattern {pattern:?} does not fit a partition side of {width} modes")]
    PatternOutOfRange { pattern: Vec<u8>, width: usize },

    #[error("bipartition ({m}, {rest}) is not balanced")]
    UnbalancedBipartition { m: usize, rest: usize },

    #[error("expected length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("operands live on different spaces or have incompatible shapes: {0}")]
    ShapeMismatch(String),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, FermiError>;
