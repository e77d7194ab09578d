use num_complex::Complex64;

use crate::bipartition::{BlockDim, BlockEmbedding, ModeBipartition};
use crate::error::Result;
use crate::fock::DensityMatrix;
use crate::linalg::{self, CMatrix};
use crate::tolerance;

/// Diagonal sector block `ρ^{(k,k)}` in local product order `σ·D' + σ'`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBlock {
    pub dims: BlockDim,
    /// `p_k = Tr ρ^{(k,k)}`
    pub weight: f64,
    raw: CMatrix,
}

impl SectorBlock {
    /// Unit-trace block, `None` when `p_k < 1e-14`.
    pub fn state(&self) -> Option<CMatrix> {
        (self.weight >= tolerance::EMPTY_BLOCK)
            .then(|| &self.raw / Complex64::new(self.weight, 0.0))
    }

    /// `p_k ρ_k` as stored.
    pub fn unnormalized(&self) -> &CMatrix {
        &self.raw
    }
}

/// `ρ = Σ_k p_k ρ_k + η`
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    embedding: BlockEmbedding,
    blocks: Vec<SectorBlock>,
    eta: CMatrix,
}

impl BlockDecomposition {
    pub fn embedding(&self) -> &BlockEmbedding {
        &self.embedding
    }

    pub fn blocks(&self) -> &[SectorBlock] {
        &self.blocks
    }

    pub fn weights(&self) -> Vec<(usize, f64)> {
        self.blocks.iter().map(|b| (b.dims.k, b.weight)).collect()
    }

    /// Cross-sector coherences on the global basis.
    pub fn eta(&self) -> &CMatrix {
        &self.eta
    }

    pub fn eta_norm(&self) -> f64 {
        linalg::max_abs(&self.eta)
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.eta_norm() <= tolerance::OFF_DIAGONAL
    }

    /// `Σ_k p_k ρ_k + η` on the global basis.
    pub fn reconstruct(&self) -> CMatrix {
        let mut out = self.eta.clone();
        for (block, sector) in self.blocks.iter().zip(self.embedding.sectors()) {
            for (a, &ga) in sector.global.iter().enumerate() {
                for (b, &gb) in sector.global.iter().enumerate() {
                    out[(ga, gb)] = block.raw[(a, b)];
                }
            }
        }
        out
    }
}

pub fn block_decompose(rho: &DensityMatrix, bp: &ModeBipartition) -> Result<BlockDecomposition> {
    let embedding = BlockEmbedding::new(bp, rho.space())?;
    let matrix = rho.matrix();
    let mut eta = matrix.clone();
    let mut blocks = Vec::with_capacity(embedding.sectors().len());
    for sector in embedding.sectors() {
        let raw = CMatrix::from_fn(sector.size(), sector.size(), |a, b| {
            matrix[(sector.global[a], sector.global[b])]
        });
        for &ga in &sector.global {
            for &gb in &sector.global {
                eta[(ga, gb)] = linalg::ZERO;
            }
        }
        blocks.push(SectorBlock {
            dims: sector.dims,
            weight: linalg::trace(&raw).re,
            raw,
        });
    }
    Ok(BlockDecomposition {
        embedding,
        blocks,
        eta,
    })
}
