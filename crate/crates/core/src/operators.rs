//! Concrete operators of the multimode interferometer: weighted collective
//! `J` operators, quadratic Hamiltonians, the pairwise Bogolubov rotation
//! and the projector-sandwiched local flips `|p'⟩⟨p|` used to read off Fock
//! coefficients.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartition::{ModeBipartition, Side};
use crate::error::{FermiError, Result};
use crate::fock::{
    operator_matrix, FockSpace, Ladder, LadderMonomial, OccupationState, OperatorExpr,
    OperatorMatrix, StateVector,
};
use crate::linalg::{self, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// `(k, ε_{ijk})` with `ε_{xyz} = 1`; `None` when `i == j`.
    pub fn cross(self, other: Axis) -> Option<(Axis, f64)> {
        use Axis::*;
        match (self, other) {
            (X, Y) => Some((Z, 1.0)),
            (Y, Z) => Some((X, 1.0)),
            (Z, X) => Some((Y, 1.0)),
            (Y, X) => Some((Z, -1.0)),
            (Z, Y) => Some((X, -1.0)),
            (X, Z) => Some((Y, -1.0)),
            _ => None,
        }
    }
}

/// Per-pair weights `ω_1 ... ω_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralWeights {
    omega: Vec<f64>,
}

impl SpectralWeights {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if let Some(w) = omega.iter().find(|w| !w.is_finite()) {
            return Err(FermiError::NonFinite(format!("spectral weight {w}")));
        }
        Ok(Self { omega })
    }

    /// `ω_k = k^p`, `k = 1..=m`.
    pub fn power(m: usize, p: u32) -> Self {
        Self {
            omega: (1..=m).map(|k| (k as f64).powi(p as i32)).collect(),
        }
    }

    pub fn constant(m: usize) -> Self {
        Self::power(m, 0)
    }

    pub fn values(&self) -> &[f64] {
        &self.omega
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// `ω_k^n`; negative `n` with a zero weight is rejected.
    pub fn powers(&self, n: i32) -> Result<Vec<f64>> {
        self.omega
            .iter()
            .map(|&w| {
                let v = w.powi(n);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(FermiError::NonFinite(format!("{w}^{n}")))
                }
            })
            .collect()
    }
}

/// Single-mode energies `Ω_1 ... Ω_M` (ħ = 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    omega: Vec<f64>,
}

impl Dispersion {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if let Some(w) = omega.iter().find(|w| !w.is_finite()) {
            return Err(FermiError::NonFinite(format!("dispersion value {w}")));
        }
        Ok(Self { omega })
    }

    /// `Ω_k = k`.
    pub fn linear(modes: usize) -> Self {
        Self {
            omega: (1..=modes).map(|k| k as f64).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.omega
    }
}

fn check_balanced(bp: &ModeBipartition, space: &FockSpace) -> Result<()> {
    bp.check_space(space)?;
    if !bp.is_balanced() {
        return Err(FermiError::UnbalancedBipartition {
            m: bp.m(),
            rest: bp.rest(),
        });
    }
    Ok(())
}

/// Symbolic `J_axis^{(n)} = ½ Σ_k ω_k^n (...)` pairing mode `k` with `m + k`.
pub fn j_expr(axis: Axis, n: i32, weights: &SpectralWeights, bp: &ModeBipartition) -> Result<OperatorExpr> {
    if !bp.is_balanced() {
        return Err(FermiError::UnbalancedBipartition {
            m: bp.m(),
            rest: bp.rest(),
        });
    }
    let m = bp.m();
    if weights.len() != m {
        return Err(FermiError::LengthMismatch {
            expected: m,
            actual: weights.len(),
        });
    }
    let half = 0.5;
    let mut expr = OperatorExpr::new();
    for (k, w) in (1..=m).zip(weights.powers(n)?) {
        let c = w * half;
        match axis {
            Axis::X => {
                expr.push(LadderMonomial::hop(k, m + k).scaled(c));
                expr.push(LadderMonomial::hop(m + k, k).scaled(c));
            }
            Axis::Y => {
                // 1/(2i) = -i/2
                let ci = Complex64::new(0.0, -c);
                expr.push(LadderMonomial::hop(k, m + k).scaled(ci));
                expr.push(LadderMonomial::hop(m + k, k).scaled(-ci));
            }
            Axis::Z => {
                expr.push(LadderMonomial::number(k).scaled(c));
                expr.push(LadderMonomial::number(m + k).scaled(-c));
            }
        }
    }
    Ok(expr)
}

/// Matrix of `J_axis^{(n)}` on `space`.
pub fn build_j(
    axis: Axis,
    n: i32,
    weights: &SpectralWeights,
    bp: &ModeBipartition,
    space: &Arc<FockSpace>,
) -> Result<OperatorMatrix> {
    check_balanced(bp, space)?;
    operator_matrix(&j_expr(axis, n, weights, bp)?, space)
}

/// `H = Σ_k Ω_k n_k`, diagonal in the Fock basis.
pub fn build_hamiltonian(d: &Dispersion, space: &Arc<FockSpace>) -> Result<OperatorMatrix> {
    let energies = mode_energies(d, space)?;
    let matrix = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        energies.len(),
        energies.into_iter().map(Complex64::from),
    ));
    OperatorMatrix::new(space.clone(), matrix)
}

fn mode_energies(d: &Dispersion, space: &FockSpace) -> Result<Vec<f64>> {
    if d.values().len() != space.modes() {
        return Err(FermiError::LengthMismatch {
            expected: space.modes(),
            actual: d.values().len(),
        });
    }
    Ok(space
        .basis()
        .iter()
        .map(|s| {
            s.occupied_modes()
                .iter()
                .map(|&i| d.values()[i - 1])
                .sum()
        })
        .collect())
}

/// `exp(-i t H)` assembled as the product of the single-mode factors
/// `exp(-i t Ω_k n_k)`.
pub fn hamiltonian_propagator(d: &Dispersion, space: &Arc<FockSpace>, t: f64) -> Result<OperatorMatrix> {
    mode_energies(d, space)?;
    let dim = space.dim();
    let mut u = CMatrix::identity(dim, dim);
    for (k, &omega) in d.values().iter().enumerate() {
        let number = operator_matrix(&LadderMonomial::number(k + 1).into(), space)?;
        let factor = linalg::unitary_exp(number.matrix(), -t * omega);
        u = factor * u;
    }
    OperatorMatrix::new(space.clone(), u)
}

/// Single-particle `2m × 2m` rotation with `a†_k ↦ (a†_k + a†_{m+k})/√2`
/// and `a†_{m+k} ↦ (a†_k - a†_{m+k})/√2`. Column `j` holds the image of
/// `a†_j`.
pub fn pairwise_rotation(m: usize) -> CMatrix {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut u = CMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        u[(k, k)] = h;
        u[(m + k, k)] = h;
        u[(k, m + k)] = h;
        u[(m + k, m + k)] = -h;
    }
    u
}

/// Lift a single-particle unitary to the `N`-particle sector: each basis
/// vector `a†_{i_1} ... a†_{i_N}|0⟩` is sent to the product of the
/// transformed creators applied to the vacuum.
pub fn lift_single_particle(u: &CMatrix, space: &Arc<FockSpace>) -> Result<OperatorMatrix> {
    let modes = space.modes();
    if u.nrows() != modes || u.ncols() != modes {
        return Err(FermiError::ShapeMismatch(format!(
            "{}x{} single-particle matrix for {modes} modes",
            u.nrows(),
            u.ncols()
        )));
    }
    let dim = space.dim();
    let mut out = CMatrix::zeros(dim, dim);
    let vacuum = OccupationState::vacuum(modes)?;
    for (col, state) in space.basis().iter().enumerate() {
        let mut current: BTreeMap<u64, Complex64> = BTreeMap::from([(vacuum.bits(), linalg::ONE)]);
        // rightmost creator acts first
        for &j in state.occupied_modes().iter().rev() {
            let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
            for (&bits, &amp) in &current {
                let occ = occupation(bits, modes);
                for r in 1..=modes {
                    let coeff = u[(r - 1, j - 1)];
                    if coeff == linalg::ZERO {
                        continue;
                    }
                    if let Some((sign, image)) = Ladder::create(r).act(occ) {
                        *next.entry(image.bits()).or_insert(linalg::ZERO) += amp * coeff * sign;
                    }
                }
            }
            current = next;
        }
        for (bits, amp) in current {
            let row = space
                .index_of(&occupation(bits, modes))
                .expect("creators fill exactly N modes");
            out[(row, col)] = amp;
        }
    }
    OperatorMatrix::new(space.clone(), out)
}

fn occupation(bits: u64, modes: usize) -> OccupationState {
    let occupied: Vec<usize> = (1..=modes)
        .filter(|&i| bits >> (modes - i) & 1 == 1)
        .collect();
    OccupationState::from_modes(&occupied, modes).expect("bits within range")
}

/// Fock-space unitary of the pairwise rotation on `M = 2m` modes. It maps
/// `J_x^{(n)}` to `J_z^{(n)}` under `U J U†`.
pub fn bogolubov_pairwise(space: &Arc<FockSpace>, m: usize) -> Result<OperatorMatrix> {
    if space.modes() != 2 * m {
        return Err(FermiError::UnbalancedBipartition {
            m,
            rest: space.modes().saturating_sub(m),
        });
    }
    lift_single_particle(&pairwise_rotation(m), space)
}

fn parse_pattern(pattern: &[u8], width: usize) -> Result<Vec<bool>> {
    if pattern.len() != width || pattern.iter().any(|&b| b > 1) {
        return Err(FermiError::PatternOutOfRange {
            pattern: pattern.to_vec(),
            width,
        });
    }
    Ok(pattern.iter().map(|&b| b == 1).collect())
}

/// `(a†)^{p'} Π_side (a)^{p}` restricted to one side of a bipartition, with
/// `Π_side` projecting onto an empty side. On states it acts as
/// `|p'⟩⟨p| ⊗ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFlip {
    bipartition: ModeBipartition,
    side: Side,
    annihilated: Vec<bool>,
    created: Vec<bool>,
}

impl LocalFlip {
    /// `p` is the pattern removed, `p_prime` the pattern written back. Both
    /// have the width of the chosen side.
    pub fn new(bp: &ModeBipartition, side: Side, p: &[u8], p_prime: &[u8]) -> Result<Self> {
        let width = match side {
            Side::First => bp.m(),
            Side::Second => bp.rest(),
        };
        Ok(Self {
            bipartition: *bp,
            side,
            annihilated: parse_pattern(p, width)?,
            created: parse_pattern(p_prime, width)?,
        })
    }

    fn first_mode(&self) -> usize {
        match self.side {
            Side::First => 1,
            Side::Second => self.bipartition.m() + 1,
        }
    }

    fn side_empty(&self, state: &OccupationState) -> bool {
        let start = self.first_mode();
        (start..start + self.annihilated.len()).all(|i| !state.is_occupied(i))
    }

    fn annihilate(&self, state: OccupationState) -> Option<(f64, OccupationState)> {
        let start = self.first_mode();
        let mut sign = 1.0;
        let mut cur = state;
        // a_start acts first
        for (offset, _) in self.annihilated.iter().enumerate().filter(|(_, &b)| b) {
            let (s, next) = Ladder::annihilate(start + offset).act(cur)?;
            sign *= s;
            cur = next;
        }
        Some((sign, cur))
    }

    fn create(&self, state: OccupationState) -> Option<(f64, OccupationState)> {
        let start = self.first_mode();
        let mut sign = 1.0;
        let mut cur = state;
        // a†_last acts first, a†_start ends up leftmost
        for (offset, _) in self.created.iter().enumerate().rev().filter(|(_, &b)| b) {
            let (s, next) = Ladder::create(start + offset).act(cur)?;
            sign *= s;
            cur = next;
        }
        Some((sign, cur))
    }

    /// Action on a basis vector through the ladder operators and projector.
    pub fn act(&self, state: OccupationState) -> Option<(f64, OccupationState)> {
        let (s1, mid) = self.annihilate(state)?;
        if !self.side_empty(&mid) {
            return None;
        }
        let (s2, out) = self.create(mid)?;
        Some((s1 * s2, out))
    }

    /// `⟨ψ|A|ψ⟩` evaluated by acting with the operator.
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        self.bipartition.check_space(psi.space())?;
        Ok(sandwich(psi, |s| self.act(s)))
    }

    /// Coefficient contraction `Σ_α C̄_{p',α} C_{p,α}` (first side) or
    /// `Σ_k C̄_{k,β'} C_{k,β}` (second side).
    pub fn contraction(&self, psi: &StateVector) -> Result<Complex64> {
        self.bipartition.check_space(psi.space())?;
        let (p, p_prime) = (pack(&self.annihilated), pack(&self.created));
        let mut acc = linalg::ZERO;
        for (i, state) in psi.space().basis().iter().enumerate() {
            let (first, second) = self.bipartition.split(state);
            let (mine, other) = match self.side {
                Side::First => (first, second),
                Side::Second => (second, first),
            };
            if mine != p {
                continue;
            }
            let partner = match self.side {
                Side::First => join(&self.bipartition, p_prime, other),
                Side::Second => join(&self.bipartition, other, p_prime),
            };
            acc += psi.amplitude(&partner).conj() * psi.amplitudes()[i];
        }
        Ok(acc)
    }
}

/// Joint flip `|p', β'⟩⟨p, β|` on both sides with the vacuum projector in
/// the middle.
#[derive(Clone, Debug, PartialEq)]
pub struct JointFlip {
    first: LocalFlip,
    second: LocalFlip,
}

impl JointFlip {
    pub fn new(
        bp: &ModeBipartition,
        (p, p_prime): (&[u8], &[u8]),
        (beta, beta_prime): (&[u8], &[u8]),
    ) -> Result<Self> {
        Ok(Self {
            first: LocalFlip::new(bp, Side::First, p, p_prime)?,
            second: LocalFlip::new(bp, Side::Second, beta, beta_prime)?,
        })
    }

    /// `a†^{p'} a†^{β'} Π_vac a^{β} a^{p}`
    pub fn act(&self, state: OccupationState) -> Option<(f64, OccupationState)> {
        let (s1, a) = self.first.annihilate(state)?;
        let (s2, b) = self.second.annihilate(a)?;
        if b.particle_count() != 0 {
            return None;
        }
        let (s3, c) = self.second.create(b)?;
        let (s4, d) = self.first.create(c)?;
        Some((s1 * s2 * s3 * s4, d))
    }

    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        self.first.bipartition.check_space(psi.space())?;
        Ok(sandwich(psi, |s| self.act(s)))
    }

    /// `C̄_{p',β'} C_{p,β}`
    pub fn contraction(&self, psi: &StateVector) -> Result<Complex64> {
        let bp = &self.first.bipartition;
        bp.check_space(psi.space())?;
        let ket = join(bp, pack(&self.first.annihilated), pack(&self.second.annihilated));
        let bra = join(bp, pack(&self.first.created), pack(&self.second.created));
        Ok(psi.amplitude(&bra).conj() * psi.amplitude(&ket))
    }
}

fn pack(pattern: &[bool]) -> u64 {
    pattern.iter().fold(0u64, |acc, &b| acc << 1 | b as u64)
}

fn join(bp: &ModeBipartition, first: u64, second: u64) -> OccupationState {
    let bits = if bp.rest() >= 64 { second } else { first << bp.rest() | second };
    occupation(bits, bp.modes())
}

fn sandwich(
    psi: &StateVector,
    act: impl Fn(OccupationState) -> Option<(f64, OccupationState)>,
) -> Complex64 {
    let mut acc = linalg::ZERO;
    for (i, &state) in psi.space().basis().iter().enumerate() {
        if let Some((sign, image)) = act(state) {
            acc += psi.amplitude(&image).conj() * psi.amplitudes()[i] * sign;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn occ(bits: &[u8]) -> OccupationState {
        OccupationState::from_occupations(bits).unwrap()
    }

    fn space(n: usize, m: usize) -> Arc<FockSpace> {
        Arc::new(FockSpace::new(n, m).unwrap())
    }

    #[test]
    fn single_pair_j_operators() {
        let sp = space(1, 2);
        let bp = ModeBipartition::balanced(2).unwrap();
        let w = SpectralWeights::constant(1);
        let jx = build_j(Axis::X, 0, &w, &bp, &sp).unwrap();
        assert_eq!(jx.matrix()[(0, 1)].re, 0.5);
        assert_eq!(jx.matrix()[(1, 0)].re, 0.5);
        let jz = build_j(Axis::Z, 1, &w, &bp, &sp).unwrap();
        assert_eq!(jz.matrix()[(0, 0)].re, 0.5);
        assert_eq!(jz.matrix()[(1, 1)].re, -0.5);
        let jy = build_j(Axis::Y, 1, &w, &bp, &sp).unwrap();
        assert!(jy.is_hermitian(0.0));
    }

    #[test]
    fn j_requires_balance() {
        let sp = space(1, 3);
        let bp = ModeBipartition::new(1, 3).unwrap();
        assert!(matches!(
            build_j(Axis::X, 1, &SpectralWeights::constant(1), &bp, &sp),
            Err(FermiError::UnbalancedBipartition { m: 1, rest: 2 })
        ));
        let bp = ModeBipartition::balanced(4).unwrap();
        assert!(matches!(
            build_j(Axis::X, 1, &SpectralWeights::constant(1), &bp, &space(1, 4)),
            Err(FermiError::LengthMismatch { .. })
        ));
        let zero = SpectralWeights::new(vec![0.0, 1.0]).unwrap();
        assert!(build_j(Axis::X, -1, &zero, &bp, &space(1, 4)).is_err());
    }

    #[test]
    fn hamiltonian_diagonal() {
        let h = build_hamiltonian(&Dispersion::new(vec![1.0, 2.0]).unwrap(), &space(1, 2)).unwrap();
        assert_eq!(h.matrix()[(0, 0)].re, 1.0);
        let sp = space(2, 4);
        let h = build_hamiltonian(&Dispersion::linear(4), &sp).unwrap();
        let i = sp.index_of(&occ(&[1, 1, 0, 0])).unwrap();
        assert_eq!(h.matrix()[(i, i)].re, 3.0);
        assert!(matches!(
            build_hamiltonian(&Dispersion::linear(3), &sp),
            Err(FermiError::LengthMismatch { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn bogolubov_on_single_fermion() {
        let sp = space(1, 2);
        let u = bogolubov_pairwise(&sp, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = CMatrix::from_row_slice(2, 2, &[h.into(), h.into(), h.into(), (-h).into()]);
        assert!(max_abs(&(u.matrix() - expected)) < 1e-15);
        assert!(bogolubov_pairwise(&space(1, 3), 1).is_err());
    }

    #[test]
    fn flip_examples() {
        let bp = ModeBipartition::new(2, 4).unwrap();
        let sp = space(2, 4);
        let psi = StateVector::fock(sp, &occ(&[1, 0, 0, 1])).unwrap();
        let f = LocalFlip::new(&bp, Side::First, &[1, 0], &[1, 0]).unwrap();
        assert_eq!(f.expectation(&psi).unwrap().re, 1.0);
        assert_eq!(f.contraction(&psi).unwrap().re, 1.0);
        assert!(matches!(
            LocalFlip::new(&bp, Side::First, &[1], &[1, 0]),
            Err(FermiError::PatternOutOfRange { .. })
        ));
        assert!(LocalFlip::new(&bp, Side::Second, &[1, 2], &[1, 0]).is_err());
    }

    #[test]
    fn loop_algebra() {
        let sp = space(2, 6);
        let bp = ModeBipartition::balanced(6).unwrap();
        let w = SpectralWeights::new(vec![1.0, 2.0, 3.0]).unwrap();
        for n in 0..=4 {
            for k in 0..=4 - n {
                for a in Axis::ALL {
                    for b in Axis::ALL {
                        let ja = build_j(a, n, &w, &bp, &sp).unwrap();
                        let jb = build_j(b, k, &w, &bp, &sp).unwrap();
                        let lhs = ja.commutator(&jb).unwrap().into_matrix();
                        let rhs = match a.cross(b) {
                            Some((c, eps)) => {
                                build_j(c, n + k, &w, &bp, &sp).unwrap().into_matrix()
                                    * Complex64::new(0.0, eps)
                            }
                            None => CMatrix::zeros(sp.dim(), sp.dim()),
                        };
                        assert!(max_abs(&(lhs - rhs)) < 1e-12, "{a:?}{n} {b:?}{k}");
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_maps_jx_to_jz() {
        for (n, modes) in [(1, 2), (2, 4), (2, 6), (3, 6)] {
            let sp = space(n, modes);
            let bp = ModeBipartition::balanced(modes).unwrap();
            let w = SpectralWeights::power(modes / 2, 1);
            let u = bogolubov_pairwise(&sp, modes / 2).unwrap().into_matrix();
            let eye = CMatrix::identity(sp.dim(), sp.dim());
            assert!(max_abs(&(u.adjoint() * &u - eye)) < 1e-13);
            let jx = build_j(Axis::X, 1, &w, &bp, &sp).unwrap().into_matrix();
            let jz = build_j(Axis::Z, 1, &w, &bp, &sp).unwrap().into_matrix();
            assert!(max_abs(&(&u * jx * u.adjoint() - jz)) < 1e-13);
        }
    }

    #[test]
    fn lift_matches_determinant_minors() {
        let sp = space(3, 5);
        let mut rng = crate::random::rng(21);
        let u = crate::random::unitary(&mut rng, 5);
        let big = lift_single_particle(&u, &sp).unwrap();
        for (row, s) in sp.basis().iter().enumerate() {
            for (col, t) in sp.basis().iter().enumerate() {
                let rows = s.occupied_modes();
                let cols = t.occupied_modes();
                let minor = CMatrix::from_fn(3, 3, |a, b| u[(rows[a] - 1, cols[b] - 1)]);
                assert!((big.matrix()[(row, col)] - minor.determinant()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn propagator_is_diagonal_phase() {
        let sp = space(2, 4);
        let d = Dispersion::new(vec![0.3, -1.0, 2.0, 0.0]).unwrap();
        let h = build_hamiltonian(&d, &sp).unwrap();
        let u = hamiltonian_propagator(&d, &sp, 0.7).unwrap();
        let direct = linalg::unitary_exp(h.matrix(), -0.7);
        assert!(max_abs(&(u.matrix() - direct)) < 1e-13);
    }

    #[test]
    fn flips_agree_with_contractions() {
        let sp = space(3, 6);
        let bp = ModeBipartition::new(2, 6).unwrap();
        let mut rng = crate::random::rng(4);
        let psi = crate::random::pure_state(&mut rng, &sp);
        let patterns2: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 0], [1, 1]];
        for p in &patterns2 {
            for q in &patterns2 {
                let f = LocalFlip::new(&bp, Side::First, p, q).unwrap();
                let diff = f.expectation(&psi).unwrap() - f.contraction(&psi).unwrap();
                assert!(diff.norm() < 1e-14, "{p:?} {q:?}");
            }
        }
        let pattern4 = |bits: u8| -> Vec<u8> { (0..4).rev().map(|i| bits >> i & 1).collect() };
        for b in 0..16 {
            for c in 0..16 {
                let f = LocalFlip::new(&bp, Side::Second, &pattern4(b), &pattern4(c)).unwrap();
                let diff = f.expectation(&psi).unwrap() - f.contraction(&psi).unwrap();
                assert!(diff.norm() < 1e-14);
                for p in &patterns2 {
                    for q in &patterns2 {
                        let j = JointFlip::new(&bp, (p, q), (&pattern4(b), &pattern4(c))).unwrap();
                        let diff = j.expectation(&psi).unwrap() - j.contraction(&psi).unwrap();
                        assert!(diff.norm() < 1e-14);
                    }
                }
            }
        }
    }
}
