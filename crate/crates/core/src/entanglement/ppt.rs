use crate::bipartition::{BlockEmbedding, ModeBipartition};
use crate::error::Result;
use crate::fock::DensityMatrix;
use crate::linalg::{self, CMatrix};

/// Partial transpose on the padded product space
/// `(⊕_k C^{D_k}) ⊗ (⊕_k C^{D'_{N-k}})`, first factor transposed.
///
/// An entry between sectors `k` and `l` lands in the subspace pairing first
/// sector `l` with second sector `N-k`. The matrix therefore splits into the
/// transposed diagonal blocks and, for `k < l`, off-diagonal pairs
/// `[[0, X], [X†, 0]]` whose spectrum is `±` the singular values of `X`.
#[derive(Clone, Debug)]
pub struct PartialTranspose {
    embedding: BlockEmbedding,
    blocks: Vec<Vec<CMatrix>>,
}

/// Transpose the first factor of a `(d1 d2) × (e1 e2)` block into a
/// `(e1 d2) × (d1 e2)` one.
pub(crate) fn transpose_first(
    block: &CMatrix,
    (d1, d2): (usize, usize),
    (e1, e2): (usize, usize),
) -> CMatrix {
    let mut out = CMatrix::zeros(e1 * d2, d1 * e2);
    for s in 0..d1 {
        for s2 in 0..d2 {
            for t in 0..e1 {
                for t2 in 0..e2 {
                    out[(t * d2 + s2, s * e2 + t2)] = block[(s * d2 + s2, t * e2 + t2)];
                }
            }
        }
    }
    out
}

/// Negativity of a density block on `C^{d1} ⊗ C^{d2}`.
pub(crate) fn block_negativity(block: &CMatrix, d1: usize, d2: usize) -> f64 {
    let pt = transpose_first(block, (d1, d2), (d1, d2));
    let values = linalg::hermitian_eigenvalues(&pt);
    let trace: f64 = values.iter().sum();
    let abs: f64 = values.iter().map(|v| v.abs()).sum();
    ((abs - trace) / 2.0).max(0.0)
}

impl PartialTranspose {
    pub fn embedding(&self) -> &BlockEmbedding {
        &self.embedding
    }

    /// Dense matrix on the padded product space, row index `i·D2 + j`.
    pub fn matrix(&self) -> CMatrix {
        let (d1, d2) = self.embedding.product_dims();
        let rho = self.embedding.unembed_matrix(&self.blocks).expect("blocks from embedding");
        let dim = self.embedding.space().dim();
        let mut out = CMatrix::zeros(d1 * d2, d1 * d2);
        for g in 0..dim {
            let (i, j) = self.embedding.product_position(g);
            for h in 0..dim {
                let (i2, j2) = self.embedding.product_position(h);
                out[(i2 * d2 + j, i * d2 + j2)] = rho[(g, h)];
            }
        }
        out
    }

    /// Full spectrum (ascending), computed subspace by subspace. Includes the
    /// zeros of the padding.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let sectors = self.embedding.sectors();
        let shape = |s: usize| (sectors[s].dims.first_dim, sectors[s].dims.second_dim);
        let mut out = Vec::new();
        for k in 0..sectors.len() {
            let pt = transpose_first(&self.blocks[k][k], shape(k), shape(k));
            out.extend(linalg::hermitian_eigenvalues(&pt));
            for l in k + 1..sectors.len() {
                let x = transpose_first(&self.blocks[k][l], shape(k), shape(l));
                let sv = linalg::singular_values(&x);
                let zeros = x.nrows() + x.ncols() - 2 * sv.len();
                out.extend(sv.iter().flat_map(|&s| [s, -s]));
                out.extend(std::iter::repeat_n(0.0, zeros));
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn trace(&self) -> f64 {
        self.blocks
            .iter()
            .enumerate()
            .map(|(k, row)| linalg::trace(&row[k]).re)
            .sum()
    }

    /// `(Σ|λ| - Tr)/2`
    pub fn negativity(&self) -> f64 {
        let abs: f64 = self.eigenvalues().iter().map(|v| v.abs()).sum();
        ((abs - self.trace()) / 2.0).max(0.0)
    }
}

pub fn partial_transpose(rho: &DensityMatrix, bp: &ModeBipartition) -> Result<PartialTranspose> {
    let embedding = BlockEmbedding::new(bp, rho.space())?;
    let blocks = embedding.embed_density(rho)?;
    Ok(PartialTranspose { embedding, blocks })
}

pub fn negativity(rho: &DensityMatrix, bp: &ModeBipartition) -> Result<f64> {
    Ok(partial_transpose(rho, bp)?.negativity())
}
