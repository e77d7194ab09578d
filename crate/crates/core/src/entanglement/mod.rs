//! Separability criteria for a state with respect to a mode bipartition.
//!
//! A state is separable when it is a convex combination of products of
//! local expectations. For a fixed particle number this happens exactly when
//! it is block diagonal in the sector label `k` and every diagonal block is
//! separable as an ordinary bipartite state on `C^{D_k} ⊗ C^{D'_{N-k}}`.

mod blocks;
mod ppt;
mod pure;
mod witness;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartition::{BlockDim, ModeBipartition};
use crate::error::Result;
use crate::fock::{DensityMatrix, FockSpace};
use crate::linalg::{self, CMatrix};
use crate::tolerance;

pub use blocks::{block_decompose, BlockDecomposition, SectorBlock};
pub use ppt::{negativity, partial_transpose, PartialTranspose};
pub use pure::{pure_separability, schmidt_coefficients};
pub use witness::{odd_odd_witness, OddOddWitness};

use ppt::block_negativity;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Separable,
    Entangled,
    Undetermined,
}

/// Why a diagonal block counts as separable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Weight below the empty-block threshold.
    Empty,
    /// One tensor factor is one-dimensional.
    TrivialFactor,
    /// PPT with `D_k D'_{N-k} ≤ 6`, where PPT is also sufficient.
    PptSmallBlock,
    /// Pure and PPT, hence a product vector.
    PureProduct,
    /// Diagonal in the product basis.
    ProductDiagonal,
    /// Purity `≤ 1/(d-1)`; every such state is separable.
    PurityBall,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockCertificate {
    pub k: usize,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    OddOddWitness { operator: String, value: Complex64 },
    NonBlockDiagonal { norm: f64 },
    NegativeBlock { k: usize, negativity: f64 },
    SchmidtSpectrum { values: Vec<f64> },
    SeparableBlocks { blocks: Vec<BlockCertificate> },
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Evidence,
}

impl From<&OddOddWitness> for Evidence {
    fn from(w: &OddOddWitness) -> Self {
        Evidence::OddOddWitness {
            operator: w.operator().to_string(),
            value: w.value,
        }
    }
}

enum BlockAssessment {
    Separable(Certificate),
    Entangled(f64),
    Undetermined,
}

fn block_purity(state: &CMatrix) -> f64 {
    state.iter().map(|z| z.norm_sqr()).sum()
}

fn assess_block(weight: f64, state: Option<&CMatrix>, dims: BlockDim) -> BlockAssessment {
    let Some(state) = state.filter(|_| weight >= tolerance::EMPTY_BLOCK) else {
        return BlockAssessment::Separable(Certificate::Empty);
    };
    let (d1, d2) = (dims.first_dim, dims.second_dim);
    if d1 == 1 || d2 == 1 {
        return BlockAssessment::Separable(Certificate::TrivialFactor);
    }
    let neg = block_negativity(state, d1, d2);
    if neg > tolerance::RANK {
        return BlockAssessment::Entangled(neg);
    }
    if d1 * d2 <= 6 {
        return BlockAssessment::Separable(Certificate::PptSmallBlock);
    }
    let purity = block_purity(state);
    if (1.0 - purity).abs() <= tolerance::RANK {
        return BlockAssessment::Separable(Certificate::PureProduct);
    }
    let off_diagonal = (0..state.nrows())
        .flat_map(|a| (0..state.ncols()).filter(move |&b| b != a).map(move |b| (a, b)))
        .map(|ab| state[ab].norm())
        .fold(0.0, f64::max);
    if off_diagonal <= tolerance::OFF_DIAGONAL {
        return BlockAssessment::Separable(Certificate::ProductDiagonal);
    }
    if purity <= 1.0 / (d1 * d2 - 1) as f64 {
        return BlockAssessment::Separable(Certificate::PurityBall);
    }
    BlockAssessment::Undetermined
}

/// Sound classification pipeline. Cross-sector coherence decides first,
/// then pure states are settled by their Schmidt rank, and block-diagonal
/// mixed states block by block. `Undetermined` is returned when a PPT block
/// is too large for the available sufficient criteria.
pub fn classify(rho: &DensityMatrix, bp: &ModeBipartition) -> Result<Verdict> {
    let dec = block_decompose(rho, bp)?;
    if !dec.is_block_diagonal() {
        return Ok(Verdict {
            status: Status::Entangled,
            evidence: Evidence::NonBlockDiagonal {
                norm: dec.eta_norm(),
            },
        });
    }
    if let Some(psi) = rho.as_pure() {
        return pure_separability(&psi, bp, tolerance::RANK);
    }
    let mut certificates = Vec::new();
    let mut undetermined = false;
    for block in dec.blocks() {
        let state = block.state();
        match assess_block(block.weight, state.as_ref(), block.dims) {
            BlockAssessment::Separable(certificate) => certificates.push(BlockCertificate {
                k: block.dims.k,
                certificate,
            }),
            BlockAssessment::Entangled(negativity) => {
                return Ok(Verdict {
                    status: Status::Entangled,
                    evidence: Evidence::NegativeBlock {
                        k: block.dims.k,
                        negativity,
                    },
                })
            }
            BlockAssessment::Undetermined => undetermined = true,
        }
    }
    Ok(if undetermined {
        Verdict {
            status: Status::Undetermined,
            evidence: Evidence::None,
        }
    } else {
        Verdict {
            status: Status::Separable,
            evidence: Evidence::SeparableBlocks {
                blocks: certificates,
            },
        }
    })
}

/// Robustness of entanglement. `LowerBound` marks a value that is not exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Robustness {
    Exact(f64),
    Infinite,
    LowerBound(f64),
}

impl Robustness {
    pub fn value(&self) -> f64 {
        match *self {
            Robustness::Exact(v) | Robustness::LowerBound(v) => v,
            Robustness::Infinite => f64::INFINITY,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Robustness::LowerBound(_))
    }
}

/// Robustness of a unit-trace block on `C^{D_k} ⊗ C^{D'_{N-k}}`.
///
/// Separable blocks give 0, pure blocks `(Σ_i s_i)² - 1` over their Schmidt
/// coefficients. Other blocks give the negativity as a lower bound: if
/// `ρ + tσ = (1+t)ρ_s` then `‖ρ^Γ‖_1 ≤ 1 + 2t`.
pub fn block_robustness(state: &CMatrix, dims: BlockDim) -> Robustness {
    match assess_block(1.0, Some(state), dims) {
        BlockAssessment::Separable(_) => Robustness::Exact(0.0),
        _ if (1.0 - block_purity(state)).abs() <= tolerance::RANK => {
            let (_, vectors) = linalg::hermitian_eigen(state);
            let top = vectors.column(vectors.ncols() - 1);
            let coefficients = CMatrix::from_fn(dims.first_dim, dims.second_dim, |a, b| {
                top[a * dims.second_dim + b]
            });
            let s: f64 = linalg::singular_values(&coefficients).iter().sum();
            Robustness::Exact(s * s - 1.0)
        }
        _ => Robustness::LowerBound(block_negativity(state, dims.first_dim, dims.second_dim)),
    }
}

/// `R(ρ) = Σ_k p_k R(ρ_k)` for block-diagonal `ρ`, infinite otherwise.
pub fn robustness(rho: &DensityMatrix, bp: &ModeBipartition) -> Result<Robustness> {
    let dec = block_decompose(rho, bp)?;
    if !dec.is_block_diagonal() {
        return Ok(Robustness::Infinite);
    }
    let mut total = 0.0;
    let mut exact = true;
    for block in dec.blocks() {
        let Some(state) = block.state() else { continue };
        let r = block_robustness(&state, block.dims);
        exact &= r.is_exact();
        total += block.weight * r.value();
    }
    Ok(if exact {
        Robustness::Exact(total)
    } else {
        Robustness::LowerBound(total)
    })
}

/// `1/D` on the `(N, M)` space bound to `bp`.
pub fn maximally_mixed(n: usize, modes: usize, bp: &ModeBipartition) -> Result<DensityMatrix> {
    let space = FockSpace::new(n, modes)?;
    bp.check_space(&space)?;
    Ok(DensityMatrix::maximally_mixed(Arc::new(space)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{OccupationState, StateVector};

    fn occ(bits: &[u8]) -> OccupationState {
        OccupationState::from_occupations(bits).unwrap()
    }

    fn bell_block_state(weight: f64) -> DensityMatrix {
        // N=2, M=4, m=2: k=1 block is C^2 ⊗ C^2 with patterns (10),(01) on each side
        let sp = Arc::new(FockSpace::new(2, 4).unwrap());
        let bell = StateVector::from_terms(
            sp.clone(),
            &[(occ(&[1, 0, 1, 0]), linalg::ONE), (occ(&[0, 1, 0, 1]), linalg::ONE)],
        )
        .unwrap()
        .normalized()
        .unwrap()
        .to_density();
        let other = StateVector::fock(sp, &occ(&[1, 1, 0, 0])).unwrap().to_density();
        DensityMatrix::mixture(&[(weight, bell), (1.0 - weight, other)]).unwrap()
    }

    #[test]
    fn verdicts() {
        let bp = ModeBipartition::new(2, 4).unwrap();
        let rho = bell_block_state(0.4);
        let v = classify(&rho, &bp).unwrap();
        assert_eq!(v.status, Status::Entangled);
        assert!(matches!(v.evidence, Evidence::NegativeBlock { k: 1, .. }));
        let r = robustness(&rho, &bp).unwrap();
        assert!((r.value() - 0.4).abs() < 1e-12 && r.is_exact());

        let mix = maximally_mixed(2, 4, &bp).unwrap();
        assert_eq!(classify(&mix, &bp).unwrap().status, Status::Separable);
        assert_eq!(robustness(&mix, &bp).unwrap(), Robustness::Exact(0.0));
    }

    #[test]
    fn coherent_superposition_is_infinitely_robust() {
        let sp = Arc::new(FockSpace::new(1, 2).unwrap());
        let rho = StateVector::from_terms(sp, &[(occ(&[1, 0]), linalg::ONE), (occ(&[0, 1]), linalg::ONE)])
            .unwrap()
            .normalized()
            .unwrap()
            .to_density();
        let bp = ModeBipartition::new(1, 2).unwrap();
        assert_eq!(robustness(&rho, &bp).unwrap(), Robustness::Infinite);
        let v = classify(&rho, &bp).unwrap();
        assert_eq!(v.status, Status::Entangled);
        assert!(matches!(v.evidence, Evidence::NonBlockDiagonal { norm } if (norm - 0.5).abs() < 1e-15));
    }
}
