#![allow(dead_code)]

use std::sync::Arc;

use itertools::Itertools;
use num_complex::Complex64;

use fermient::bipartition::{block_dimensions, BlockEmbedding, ModeBipartition};
use fermient::fock::{
    DensityMatrix, FockSpace, Ladder, LadderMonomial, OccupationState, OperatorExpr,
    StateVector,
};
use fermient::linalg::{self, CMatrix};
use fermient::random::{self, StateRng};
use rand::Rng;

pub fn space(n: usize, modes: usize) -> Arc<FockSpace> {
    Arc::new(FockSpace::new(n, modes).unwrap())
}

pub fn occ(bits: &[u8]) -> OccupationState {
    OccupationState::from_occupations(bits).unwrap()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(|1,0⟩ + |0,1⟩)/√2` on two modes.
pub fn two_mode_superposition() -> StateVector {
    StateVector::from_terms(space(1, 2), &[(occ(&[1, 0]), c(1.0)), (occ(&[0, 1]), c(1.0))])
        .unwrap()
        .normalized()
        .unwrap()
}

/// Random homogeneous polynomial of degree `k` in the creators of `modes`.
pub fn random_polynomial(
    rng: &mut StateRng,
    modes: std::ops::RangeInclusive<usize>,
    k: usize,
) -> OperatorExpr {
    modes
        .combinations(k)
        .map(|set| {
            LadderMonomial::from_factors(set.into_iter().map(Ladder::create).collect())
                .scaled(random::gaussian_complex(rng))
        })
        .collect()
}

/// `P Q |0⟩` with random `P` of degree `k` on the first partition and `Q`
/// of degree `N - k` on the second, expanded monomial by monomial on the
/// vacuum with ladder-operator signs.
pub fn product_state(
    rng: &mut StateRng,
    target: &Arc<FockSpace>,
    bp: &ModeBipartition,
    k: usize,
) -> StateVector {
    let n = target.particles();
    let modes = target.modes();
    let p = random_polynomial(rng, 1..=bp.m(), k);
    let q = random_polynomial(rng, bp.m() + 1..=modes, n - k);
    let vacuum = OccupationState::vacuum(modes).unwrap();
    let mut terms = Vec::new();
    for a in &p.terms {
        for b in &q.terms {
            let mut factors = a.factors.clone();
            factors.extend(b.factors.iter().copied());
            let mono = LadderMonomial::from_factors(factors).scaled(a.coefficient * b.coefficient);
            if let Some((amp, state)) = mono.act(vacuum) {
                terms.push((state, amp));
            }
        }
    }
    StateVector::from_terms(target.clone(), &terms).unwrap().normalized().unwrap()
}

/// Sector labels `k` with a non-empty sector.
pub fn sectors(n: usize, bp: &ModeBipartition) -> Vec<usize> {
    block_dimensions(bp, n).unwrap().iter().map(|d| d.k).collect()
}

pub fn random_product_state(rng: &mut StateRng, sp: &Arc<FockSpace>, bp: &ModeBipartition) -> StateVector {
    let ks = sectors(sp.particles(), bp);
    let k = ks[rng.random_range(0..ks.len())];
    product_state(rng, sp, bp, k)
}

/// Convex mixture of `terms` random product pure states.
pub fn random_separable(
    rng: &mut StateRng,
    sp: &Arc<FockSpace>,
    bp: &ModeBipartition,
    terms: usize,
) -> DensityMatrix {
    let raw: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, DensityMatrix)> = raw
        .iter()
        .map(|w| (w / total, random_product_state(rng, sp, bp).to_density()))
        .collect();
    DensityMatrix::mixture(&parts).unwrap()
}

/// `ρ` with all cross-sector entries removed, renormalized.
pub fn block_diagonal_part(rho: &DensityMatrix, bp: &ModeBipartition) -> DensityMatrix {
    let emb = BlockEmbedding::new(bp, rho.space()).unwrap();
    let d = rho.space().dim();
    let mut m = CMatrix::zeros(d, d);
    for s in emb.sectors() {
        for &a in &s.global {
            for &b in &s.global {
                m[(a, b)] = rho.matrix()[(a, b)];
            }
        }
    }
    let tr = linalg::trace(&m).re;
    DensityMatrix::new(rho.space().clone(), m / c(tr)).unwrap()
}

/// `(|first N modes⟩ + |last N modes⟩)/√2`, coherent across sectors for
/// every `0 < m < M` when `0 < N < M`.
pub fn edge_superposition(sp: &Arc<FockSpace>) -> StateVector {
    let (n, modes) = (sp.particles(), sp.modes());
    let left: Vec<usize> = (1..=n).collect();
    let right: Vec<usize> = (modes - n + 1..=modes).collect();
    StateVector::from_terms(
        sp.clone(),
        &[
            (OccupationState::from_modes(&left, modes).unwrap(), c(1.0)),
            (OccupationState::from_modes(&right, modes).unwrap(), c(1.0)),
        ],
    )
    .unwrap()
    .normalized()
    .unwrap()
}

/// Exact 2×2 / 2×3 PPT test on a `C^{d1} ⊗ C^{d2}` matrix, computed from
/// scratch.
pub fn ppt_min_eigenvalue(block: &CMatrix, d1: usize, d2: usize) -> f64 {
    let pt = CMatrix::from_fn(d1 * d2, d1 * d2, |r, col| {
        let (t, s2) = (r / d2, r % d2);
        let (s, t2) = (col / d2, col % d2);
        block[(s * d2 + s2, t * d2 + t2)]
    });
    linalg::hermitian_eigenvalues(&pt)[0]
}

/// Max-abs entry of the cross-sector part of `ρ`.
pub fn eta_norm(rho: &DensityMatrix, bp: &ModeBipartition) -> f64 {
    let emb = BlockEmbedding::new(bp, rho.space()).unwrap();
    let d = rho.space().dim();
    let mut best: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            if emb.locate(a).0 != emb.locate(b).0 {
                best = best.max(rho.matrix()[(a, b)].norm());
            }
        }
    }
    best
}

/// All `(N, M, m)` with `C(M, N) ≤ limit` and `M ≤ max_modes`.
pub fn shapes_up_to(limit: u128, max_modes: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for modes in 1..=max_modes {
        for n in 0..=modes {
            if fermient::fock::binomial(modes, n) > limit {
                continue;
            }
            for m in 0..=modes {
                out.push((n, modes, m));
            }
        }
    }
    out
}
