//! `(m, M-m)` mode bipartitions and their sector structure.
//!
//! The first `m` modes form the first partition. A basis vector with `k`
//! fermions in the first partition is labelled `(k, σ, σ')`, where `σ` ranks
//! its first-partition pattern among the `C(m, k)` patterns of that weight and
//! `σ'` ranks the second-partition pattern among the `C(M-m, N-k)` patterns.
//! Ranks use the same descending lexicographic order as the global basis, and
//! since the global sign convention puts first-partition creators leftmost,
//! the map `|k, σ; N-k, σ'⟩ ↔ |k, σ⟩ ⊗ |N-k, σ'⟩` is a pure permutation.
//!
//! Non-contiguous partitions are handled by [`ModeRelabeling`], which moves
//! the chosen modes to the front and carries the fermionic reordering sign.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FermiError, Result};
use crate::fock::{binomial, DensityMatrix, FockSpace, OccupationState, OperatorExpr, StateVector};
use crate::linalg::{CMatrix, CVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeBipartition {
    m: usize,
    modes: usize,
}

impl ModeBipartition {
    pub fn new(m: usize, modes: usize) -> Result<Self> {
        if m > modes {
            return Err(FermiError::InvalidShape(format!(
                "first partition has {m} modes but only {modes} exist"
            )));
        }
        Ok(Self { m, modes })
    }

    /// Modes `1..=M/2` against `M/2+1..=M`.
    pub fn balanced(modes: usize) -> Result<Self> {
        if !modes.is_multiple_of(2) {
            return Err(FermiError::UnbalancedBipartition {
                m: modes / 2,
                rest: modes - modes / 2,
            });
        }
        Self::new(modes / 2, modes)
    }

    /// Contiguous bipartition equivalent to putting `first` (1-based modes)
    /// in the first partition, plus the relabeling that realizes it.
    pub fn from_modes(first: &[usize], modes: usize) -> Result<(Self, ModeRelabeling)> {
        let mut in_first = vec![false; modes];
        for &mode in first {
            if mode == 0 || mode > modes {
                return Err(FermiError::ModeOutOfRange { mode, modes });
            }
            if in_first[mode - 1] {
                return Err(FermiError::InvalidShape(format!("mode {mode} listed twice")));
            }
            in_first[mode - 1] = true;
        }
        let m = first.len();
        let mut target = vec![0; modes];
        let (mut next_first, mut next_second) = (1, m + 1);
        for old in 0..modes {
            if in_first[old] {
                target[old] = next_first;
                next_first += 1;
            } else {
                target[old] = next_second;
                next_second += 1;
            }
        }
        Ok((Self::new(m, modes)?, ModeRelabeling::new(target)?))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn rest(&self) -> usize {
        self.modes - self.m
    }

    pub fn is_balanced(&self) -> bool {
        self.m == self.rest()
    }

    /// Fewest fermions the first partition can hold, `max(0, N - M + m)`.
    pub fn n_minus(&self, n: usize) -> usize {
        n.saturating_sub(self.rest())
    }

    /// Most fermions the first partition can hold, `min(N, m)`.
    pub fn n_plus(&self, n: usize) -> usize {
        n.min(self.m)
    }

    pub fn check_space(&self, space: &FockSpace) -> Result<()> {
        if space.modes() != self.modes {
            return Err(FermiError::UnboundSpace {
                bipartition_modes: self.modes,
                space_modes: space.modes(),
            });
        }
        Ok(())
    }

    /// First- and second-partition bit patterns, each packed with its first
    /// mode most significant.
    pub fn split(&self, state: &OccupationState) -> (u64, u64) {
        let rest = self.rest();
        let second_mask = if rest == 64 { u64::MAX } else { (1u64 << rest) - 1 };
        let first = if rest >= 64 { 0 } else { state.bits() >> rest };
        (first, state.bits() & second_mask)
    }

    pub fn contains(&self, mode: usize) -> Option<Side> {
        match mode {
            0 => None,
            i if i <= self.m => Some(Side::First),
            i if i <= self.modes => Some(Side::Second),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    First,
    Second,
}

/// `(k, σ, σ')` with 1-based `σ, σ'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectorLabel {
    pub k: usize,
    pub sigma: usize,
    pub sigma_prime: usize,
}

/// 0-based rank of `bits` among the width-`width` patterns with the same
/// popcount, in descending lexicographic order.
pub fn pattern_rank(bits: u64, width: usize) -> usize {
    let mut ones = bits.count_ones() as usize;
    let mut rank: u128 = 0;
    for pos in 0..width {
        let remaining = width - pos - 1;
        if bits >> remaining & 1 == 1 {
            ones -= 1;
        } else if ones > 0 {
            // every pattern with a 1 here and the same prefix sorts earlier
            rank += binomial(remaining, ones - 1);
        }
    }
    rank as usize
}

/// Inverse of [`pattern_rank`].
pub fn pattern_unrank(mut rank: usize, width: usize, ones: usize) -> u64 {
    let mut ones = ones;
    let mut bits = 0u64;
    for pos in 0..width {
        let remaining = width - pos - 1;
        if ones == 0 {
            break;
        }
        let with_one = binomial(remaining, ones - 1) as usize;
        if rank < with_one {
            bits |= 1 << remaining;
            ones -= 1;
        } else {
            rank -= with_one;
        }
    }
    bits
}

pub fn sector_of(state: &OccupationState, bp: &ModeBipartition) -> Result<SectorLabel> {
    if state.modes() != bp.modes {
        return Err(FermiError::UnboundSpace {
            bipartition_modes: bp.modes,
            space_modes: state.modes(),
        });
    }
    let (first, second) = bp.split(state);
    Ok(SectorLabel {
        k: first.count_ones() as usize,
        sigma: pattern_rank(first, bp.m) + 1,
        sigma_prime: pattern_rank(second, bp.rest()) + 1,
    })
}

/// `(k, D_k, D'_{N-k})`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDim {
    pub k: usize,
    pub first_dim: usize,
    pub second_dim: usize,
}

impl BlockDim {
    pub fn size(&self) -> usize {
        self.first_dim * self.second_dim
    }
}

/// Sector dimensions for `k ∈ [N_-, N_+]`.
pub fn block_dimensions(bp: &ModeBipartition, n: usize) -> Result<Vec<BlockDim>> {
    if n > bp.modes {
        return Err(FermiError::InvalidShape(format!(
            "N exceeds M ({n} > {})",
            bp.modes
        )));
    }
    Ok((bp.n_minus(n)..=bp.n_plus(n))
        .map(|k| BlockDim {
            k,
            first_dim: binomial(bp.m, k) as usize,
            second_dim: binomial(bp.rest(), n - k) as usize,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    pub fn of_degree(degree: usize) -> Self {
        if degree.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Parity of a product of homogeneous factors.
    pub fn compose(self, rhs: Parity) -> Parity {
        match (self, rhs) {
            (Parity::Mixed, _) | (_, Parity::Mixed) => Parity::Mixed,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

/// Grading of an expression under `a_i ↦ -a_i`. The empty sum is even.
pub fn parity_of(expr: &OperatorExpr) -> Parity {
    let mut parities = expr.terms.iter().map(|t| Parity::of_degree(t.degree()));
    let Some(first) = parities.next() else {
        return Parity::Even;
    };
    if parities.all(|p| p == first) {
        first
    } else {
        Parity::Mixed
    }
}

/// One sector `H_k ≅ C^{D_k} ⊗ C^{D'_{N-k}}` of a bound space.
#[derive(Clone, Debug, PartialEq)]
pub struct Sector {
    pub dims: BlockDim,
    /// Global basis index of local position `σ·D' + σ'` (0-based).
    pub global: Vec<usize>,
}

impl Sector {
    pub fn k(&self) -> usize {
        self.dims.k
    }

    pub fn size(&self) -> usize {
        self.global.len()
    }
}

/// Bijection between a space's basis and the sector product labels.
#[derive(Clone, Debug)]
pub struct BlockEmbedding {
    bipartition: ModeBipartition,
    space: Arc<FockSpace>,
    sectors: Vec<Sector>,
    /// Global index → (sector position, local index).
    locate: Vec<(usize, usize)>,
}

impl BlockEmbedding {
    pub fn new(bp: &ModeBipartition, space: &Arc<FockSpace>) -> Result<Self> {
        bp.check_space(space)?;
        let dims = block_dimensions(bp, space.particles())?;
        let k_min = bp.n_minus(space.particles());
        let mut sectors: Vec<Sector> = dims
            .iter()
            .map(|&d| Sector {
                dims: d,
                global: vec![usize::MAX; d.size()],
            })
            .collect();
        let mut locate = vec![(0, 0); space.dim()];
        for (g, state) in space.basis().iter().enumerate() {
            let label = sector_of(state, bp)?;
            let s = label.k - k_min;
            let local = (label.sigma - 1) * sectors[s].dims.second_dim + label.sigma_prime - 1;
            sectors[s].global[local] = g;
            locate[g] = (s, local);
        }
        debug_assert!(sectors
            .iter()
            .all(|s| s.global.iter().all(|&g| g != usize::MAX)));
        Ok(Self {
            bipartition: *bp,
            space: space.clone(),
            sectors,
            locate,
        })
    }

    pub fn bipartition(&self) -> &ModeBipartition {
        &self.bipartition
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// Sector position and local index of a global basis index.
    pub fn locate(&self, global: usize) -> (usize, usize) {
        self.locate[global]
    }

    fn check(&self, space: &FockSpace) -> Result<()> {
        if space.modes() != self.bipartition.modes {
            return Err(FermiError::UnboundSpace {
                bipartition_modes: self.bipartition.modes,
                space_modes: space.modes(),
            });
        }
        if space.particles() != self.space.particles() {
            return Err(FermiError::ShapeMismatch(format!(
                "embedding built for N={}, got N={}",
                self.space.particles(),
                space.particles()
            )));
        }
        Ok(())
    }

    /// Per-sector `D_k × D'_{N-k}` coefficient matrices `C_{σ σ'}`.
    pub fn embed_state(&self, psi: &StateVector) -> Result<Vec<CMatrix>> {
        self.check(psi.space())?;
        Ok(self
            .sectors
            .iter()
            .map(|s| {
                CMatrix::from_fn(s.dims.first_dim, s.dims.second_dim, |a, b| {
                    psi.amplitudes()[s.global[a * s.dims.second_dim + b]]
                })
            })
            .collect())
    }

    pub fn unembed_state(&self, blocks: &[CMatrix]) -> Result<StateVector> {
        self.check_block_shapes(blocks.iter().map(|b| (b.nrows(), b.ncols())), |s| {
            (s.dims.first_dim, s.dims.second_dim)
        })?;
        let mut amps = CVector::zeros(self.space.dim());
        for (s, block) in self.sectors.iter().zip(blocks) {
            for a in 0..s.dims.first_dim {
                for b in 0..s.dims.second_dim {
                    amps[s.global[a * s.dims.second_dim + b]] = block[(a, b)];
                }
            }
        }
        StateVector::new(self.space.clone(), amps)
    }

    /// Blocks `ρ^{(k,l)}` indexed `[k_pos][l_pos]`, each
    /// `(D_k D'_{N-k}) × (D_l D'_{N-l})` with local product ordering.
    pub fn embed_density(&self, rho: &DensityMatrix) -> Result<Vec<Vec<CMatrix>>> {
        self.check(rho.space())?;
        Ok(self.embed_matrix(rho.matrix()))
    }

    pub(crate) fn embed_matrix(&self, m: &CMatrix) -> Vec<Vec<CMatrix>> {
        self.sectors
            .iter()
            .map(|row| {
                self.sectors
                    .iter()
                    .map(|col| {
                        CMatrix::from_fn(row.size(), col.size(), |a, b| {
                            m[(row.global[a], col.global[b])]
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn unembed_density(&self, blocks: &[Vec<CMatrix>]) -> Result<DensityMatrix> {
        DensityMatrix::new_unchecked(self.space.clone(), self.unembed_matrix(blocks)?)
    }

    pub(crate) fn unembed_matrix(&self, blocks: &[Vec<CMatrix>]) -> Result<CMatrix> {
        if blocks.len() != self.sectors.len() {
            return Err(FermiError::ShapeMismatch(format!(
                "{} block rows for {} sectors",
                blocks.len(),
                self.sectors.len()
            )));
        }
        let d = self.space.dim();
        let mut out = CMatrix::zeros(d, d);
        for (row, brow) in self.sectors.iter().zip(blocks) {
            self.check_block_shapes(brow.iter().map(|b| (b.nrows(), b.ncols())), |col| {
                (row.size(), col.size())
            })?;
            for (col, block) in self.sectors.iter().zip(brow) {
                for a in 0..row.size() {
                    for b in 0..col.size() {
                        out[(row.global[a], col.global[b])] = block[(a, b)];
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_block_shapes(
        &self,
        shapes: impl ExactSizeIterator<Item = (usize, usize)>,
        expected: impl Fn(&Sector) -> (usize, usize),
    ) -> Result<()> {
        if shapes.len() != self.sectors.len() {
            return Err(FermiError::ShapeMismatch(format!(
                "{} blocks for {} sectors",
                shapes.len(),
                self.sectors.len()
            )));
        }
        for (shape, s) in shapes.zip(&self.sectors) {
            if shape != expected(s) {
                return Err(FermiError::ShapeMismatch(format!(
                    "block for k={} has shape {shape:?}, expected {:?}",
                    s.k(),
                    expected(s)
                )));
            }
        }
        Ok(())
    }

    /// Dimensions `(Σ_k D_k, Σ_k D'_{N-k})` of the padded product space
    /// `(⊕_k C^{D_k}) ⊗ (⊕_k C^{D'_{N-k}})`.
    pub fn product_dims(&self) -> (usize, usize) {
        let d1 = self.sectors.iter().map(|s| s.dims.first_dim).sum();
        let d2 = self.sectors.iter().map(|s| s.dims.second_dim).sum();
        (d1, d2)
    }

    /// Position `(i, j)` of a global basis vector in the padded product
    /// space. First-factor offsets grow with `k`, second-factor offsets with
    /// `N - k`.
    pub fn product_position(&self, global: usize) -> (usize, usize) {
        let (s, local) = self.locate[global];
        let sector = &self.sectors[s];
        let first_offset: usize = self.sectors[..s].iter().map(|x| x.dims.first_dim).sum();
        let second_offset: usize = self.sectors[s + 1..].iter().map(|x| x.dims.second_dim).sum();
        (
            first_offset + local / sector.dims.second_dim,
            second_offset + local % sector.dims.second_dim,
        )
    }

    /// Padded coefficient matrix `C_{p, β}` over all first/second patterns,
    /// zero where `|p| + |β| ≠ N`.
    pub fn coefficient_matrix(&self, psi: &StateVector) -> Result<CMatrix> {
        self.check(psi.space())?;
        let (d1, d2) = self.product_dims();
        let mut out = CMatrix::zeros(d1, d2);
        for (g, amp) in psi.amplitudes().iter().enumerate() {
            let (i, j) = self.product_position(g);
            out[(i, j)] = *amp;
        }
        Ok(out)
    }
}

/// Mode permutation `i ↦ target[i-1]` lifted to the Fock space, with the
/// sign from re-sorting the creators into ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeRelabeling {
    target: Vec<usize>,
}

impl ModeRelabeling {
    pub fn new(target: Vec<usize>) -> Result<Self> {
        let modes = target.len();
        let mut seen = vec![false; modes];
        for &t in &target {
            if t == 0 || t > modes {
                return Err(FermiError::ModeOutOfRange { mode: t, modes });
            }
            if seen[t - 1] {
                return Err(FermiError::InvalidShape(format!(
                    "mode {t} is targeted twice"
                )));
            }
            seen[t - 1] = true;
        }
        Ok(Self { target })
    }

    pub fn modes(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self, mode: usize) -> usize {
        self.target[mode - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.target.len()];
        for (i, &t) in self.target.iter().enumerate() {
            inv[t - 1] = i + 1;
        }
        Self { target: inv }
    }

    /// Image of a basis vector and its sign.
    pub fn map_state(&self, state: &OccupationState) -> (f64, OccupationState) {
        let images: Vec<usize> = state
            .occupied_modes()
            .into_iter()
            .map(|i| self.target(i))
            .collect();
        let mut inversions = 0usize;
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                if images[a] > images[b] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions.is_multiple_of(2) { 1.0 } else { -1.0 };
        let out = OccupationState::from_modes(&images, state.modes())
            .expect("permutation keeps modes in range");
        (sign, out)
    }

    /// Signed permutation matrix `U` with `U a†_i U† = a†_{target(i)}`.
    pub fn unitary(&self, space: &FockSpace) -> Result<CMatrix> {
        if space.modes() != self.modes() {
            return Err(FermiError::UnboundSpace {
                bipartition_modes: self.modes(),
                space_modes: space.modes(),
            });
        }
        let d = space.dim();
        let mut u = CMatrix::zeros(d, d);
        for (col, state) in space.basis().iter().enumerate() {
            let (sign, image) = self.map_state(state);
            let row = space.index_of(&image).expect("same particle number");
            u[(row, col)] = sign.into();
        }
        Ok(u)
    }

    pub fn apply_state(&self, psi: &StateVector) -> Result<StateVector> {
        let u = self.unitary(psi.space())?;
        StateVector::new(psi.space().clone(), u * psi.amplitudes())
    }

    pub fn apply_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let u = self.unitary(rho.space())?;
        rho.conjugate(&u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::LadderMonomial;

    fn occ(bits: &[u8]) -> OccupationState {
        OccupationState::from_occupations(bits).unwrap()
    }

    #[test]
    fn sector_labels() {
        let bp = ModeBipartition::new(2, 4).unwrap();
        let l = |b: &[u8]| {
            let s = sector_of(&occ(b), &bp).unwrap();
            (s.k, s.sigma, s.sigma_prime)
        };
        assert_eq!(l(&[1, 0, 0, 1]), (1, 1, 2));
        assert_eq!(l(&[1, 1, 0, 0]), (2, 1, 1));
        assert_eq!(l(&[0, 0, 1, 1]), (0, 1, 1));
        assert!(matches!(
            sector_of(&occ(&[1, 0, 0]), &bp),
            Err(FermiError::UnboundSpace { .. })
        ));
    }

    // Oracle: explicit list of weight-k patterns sorted descending.
    #[test]
    fn rank_matches_sorted_enumeration() {
        for width in 0..=9usize {
            for ones in 0..=width {
                let mut patterns: Vec<u64> = (0..(1u64 << width))
                    .filter(|p| p.count_ones() as usize == ones)
                    .collect();
                patterns.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(patterns.len() as u128, binomial(width, ones));
                for (r, &p) in patterns.iter().enumerate() {
                    assert_eq!(pattern_rank(p, width), r);
                    assert_eq!(pattern_unrank(r, width, ones), p);
                }
            }
        }
    }

    #[test]
    fn block_dimension_examples() {
        let dims = |n, modes, m| -> Vec<(usize, usize, usize)> {
            block_dimensions(&ModeBipartition::new(m, modes).unwrap(), n)
                .unwrap()
                .iter()
                .map(|d| (d.k, d.first_dim, d.second_dim))
                .collect()
        };
        assert_eq!(dims(2, 4, 2), vec![(0, 1, 1), (1, 2, 2), (2, 1, 1)]);
        assert_eq!(dims(1, 2, 1), vec![(0, 1, 1), (1, 1, 1)]);
        assert_eq!(dims(3, 6, 2), vec![(0, 1, 4), (1, 2, 6), (2, 1, 4)]);
        assert!(block_dimensions(&ModeBipartition::new(1, 2).unwrap(), 3).is_err());
    }

    #[test]
    fn parities() {
        assert_eq!(parity_of(&LadderMonomial::hop(1, 2).into()), Parity::Even);
        assert_eq!(parity_of(&LadderMonomial::creator(1).into()), Parity::Odd);
        assert_eq!(
            parity_of(&(LadderMonomial::annihilator(1) + LadderMonomial::number(1))),
            Parity::Mixed
        );
        assert_eq!(parity_of(&OperatorExpr::new()), Parity::Even);
        assert_eq!(Parity::Odd.compose(Parity::Odd), Parity::Even);
        assert_eq!(Parity::Even.compose(Parity::Odd), Parity::Odd);
        assert_eq!(Parity::Even.compose(Parity::Even), Parity::Even);
    }

    #[test]
    fn embedding_examples() {
        let space = Arc::new(FockSpace::new(1, 2).unwrap());
        let bp = ModeBipartition::new(1, 2).unwrap();
        let emb = BlockEmbedding::new(&bp, &space).unwrap();
        let s10 = StateVector::fock(space.clone(), &occ(&[1, 0])).unwrap();
        let blocks = emb.embed_state(&s10).unwrap();
        // sectors ordered k = 0, 1
        assert_eq!(blocks[1][(0, 0)].re, 1.0);
        assert_eq!(blocks[0][(0, 0)].re, 0.0);

        let s01 = StateVector::fock(space.clone(), &occ(&[0, 1])).unwrap();
        let phi = s10.add(&s01).unwrap().normalized().unwrap();
        let blocks = emb.embed_state(&phi).unwrap();
        let h = 0.5f64.sqrt();
        assert!((blocks[0][(0, 0)].re - h).abs() < 1e-15);
        assert!((blocks[1][(0, 0)].re - h).abs() < 1e-15);
    }

    #[test]
    fn relabeling_sign() {
        // swap modes 1 and 2: a†_1 a†_2 |0⟩ ↦ a†_2 a†_1 |0⟩ = -|1,1⟩
        let r = ModeRelabeling::new(vec![2, 1]).unwrap();
        assert_eq!(r.map_state(&occ(&[1, 1])), (-1.0, occ(&[1, 1])));
        assert_eq!(r.map_state(&occ(&[1, 0])), (1.0, occ(&[0, 1])));
        assert!(ModeRelabeling::new(vec![1, 1]).is_err());

        let (bp, rel) = ModeBipartition::from_modes(&[2, 4], 4).unwrap();
        assert_eq!(bp.m(), 2);
        assert_eq!((1..=4).map(|i| rel.target(i)).collect::<Vec<_>>(), vec![3, 1, 4, 2]);
        assert_eq!(rel.inverse().target(3), 1);
    }
}
