use std::collections::HashMap;
use std::fmt;

use crate::error::{FermiError, Result};

/// Default upper bound on the dimension of a [`FockSpace`].
pub const DEFAULT_DIM_CAP: usize = 20_000;

/// Largest mode count representable by the bit-packed occupation vector.
pub const MAX_MODES: usize = 64;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Occupation numbers `(n_1, ..., n_M)` of a Fock basis vector.
///
/// Mode `i` (1-based) is stored at bit `M - i`, so comparing the packed
/// integers is the same as comparing the bit-vectors lexicographically with
/// mode 1 most significant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationState {
    bits: u64,
    modes: usize,
}

impl OccupationState {
    pub fn vacuum(modes: usize) -> Result<Self> {
        if modes > MAX_MODES {
            return Err(FermiError::InvalidShape(format!(
                "at most {MAX_MODES} modes are supported, got {modes}"
            )));
        }
        Ok(Self { bits: 0, modes })
    }

    pub fn from_occupations(occupations: &[u8]) -> Result<Self> {
        let mut state = Self::vacuum(occupations.len())?;
        for (i, &n) in occupations.iter().enumerate() {
            match n {
                0 => {}
                1 => state = state.with_mode(i + 1, true),
                other => {
                    return Err(FermiError::InvalidShape(format!(
                        "occupation number {other} at mode {} is not 0 or 1",
                        i + 1
                    )))
                }
            }
        }
        Ok(state)
    }

    pub fn from_modes(occupied: &[usize], modes: usize) -> Result<Self> {
        let mut state = Self::vacuum(modes)?;
        for &mode in occupied {
            if mode == 0 || mode > modes {
                return Err(FermiError::ModeOutOfRange { mode, modes });
            }
            state = state.with_mode(mode, true);
        }
        Ok(state)
    }

    pub(crate) fn from_bits(bits: u64, modes: usize) -> Self {
        Self { bits, modes }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    fn mask(&self, mode: usize) -> u64 {
        1u64 << (self.modes - mode)
    }

    /// Occupation of `mode` (1-based). Panics when the mode is out of range.
    #[inline]
    pub fn is_occupied(&self, mode: usize) -> bool {
        assert!(mode >= 1 && mode <= self.modes, "mode {mode} out of range");
        self.bits & self.mask(mode) != 0
    }

    #[inline]
    pub fn with_mode(self, mode: usize, occupied: bool) -> Self {
        let mask = self.mask(mode);
        let bits = if occupied {
            self.bits | mask
        } else {
            self.bits & !mask
        };
        Self { bits, ..self }
    }

    pub fn particle_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of occupied modes strictly before `mode`.
    #[inline]
    pub fn count_before(&self, mode: usize) -> usize {
        let shift = self.modes - mode + 1;
        if shift >= 64 {
            0
        } else {
            (self.bits >> shift).count_ones() as usize
        }
    }

    pub fn occupations(&self) -> Vec<u8> {
        (1..=self.modes).map(|i| self.is_occupied(i) as u8).collect()
    }

    /// Occupied modes in ascending order.
    pub fn occupied_modes(&self) -> Vec<usize> {
        (1..=self.modes).filter(|&i| self.is_occupied(i)).collect()
    }
}

impl fmt::Debug for OccupationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.occupations().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

impl PartialOrd for OccupationState {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OccupationState {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.modes
            .cmp(&other.modes)
            .then(self.bits.cmp(&other.bits))
    }
}

/// The `C(M, N)`-dimensional space of `N` fermions in `M` modes.
///
/// Basis vectors are ordered lexicographically descending on the occupation
/// bit-vector, so `(1,1,...,1,0,...,0)` comes first.
#[derive(Clone, PartialEq)]
pub struct FockSpace {
    particles: usize,
    modes: usize,
    basis: Vec<OccupationState>,
    index: HashMap<u64, usize>,
}

impl fmt::Debug for FockSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockSpace")
            .field("particles", &self.particles)
            .field("modes", &self.modes)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl FockSpace {
    /// Enumerate the basis under [`DEFAULT_DIM_CAP`].
    pub fn new(particles: usize, modes: usize) -> Result<Self> {
        Self::with_cap(particles, modes, DEFAULT_DIM_CAP)
    }

    pub fn with_cap(particles: usize, modes: usize, cap: usize) -> Result<Self> {
        if particles > modes {
            return Err(FermiError::InvalidShape(format!(
                "N exceeds M ({particles} > {modes})"
            )));
        }
        if modes > MAX_MODES {
            return Err(FermiError::InvalidShape(format!(
                "at most {MAX_MODES} modes are supported, got {modes}"
            )));
        }
        let dim = binomial(modes, particles);
        if dim > cap as u128 {
            return Err(FermiError::DimensionCapExceeded { dim, cap });
        }

        let mut basis = Vec::with_capacity(dim as usize);
        fill_descending(0, modes, particles, 0, modes, &mut basis);
        debug_assert_eq!(basis.len() as u128, dim);
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, s)| (s.bits, i))
            .collect();
        Ok(Self {
            particles,
            modes,
            basis,
            index,
        })
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[OccupationState] {
        &self.basis
    }

    pub fn state(&self, i: usize) -> OccupationState {
        self.basis[i]
    }

    /// Position of `state` in the basis, `None` if it has the wrong particle
    /// or mode count.
    pub fn index_of(&self, state: &OccupationState) -> Option<usize> {
        if state.modes != self.modes {
            return None;
        }
        self.index.get(&state.bits).copied()
    }
}

// Emits every `remaining`-subset of modes `next..=modes`, 1 before 0.
fn fill_descending(
    prefix: u64,
    modes: usize,
    remaining: usize,
    placed: usize,
    total: usize,
    out: &mut Vec<OccupationState>,
) {
    let free = modes - placed;
    if remaining == 0 {
        out.push(OccupationState::from_bits(prefix, total));
        return;
    }
    if free < remaining {
        return;
    }
    let bit = 1u64 << (free - 1);
    fill_descending(prefix | bit, modes, remaining - 1, placed + 1, total, out);
    if free > remaining {
        fill_descending(prefix, modes, remaining, placed + 1, total, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn small_spaces() {
        assert_eq!(FockSpace::new(2, 4).unwrap().dim(), 6);
        let vac = FockSpace::new(0, 3).unwrap();
        assert_eq!(vac.dim(), 1);
        assert_eq!(vac.state(0).occupations(), vec![0, 0, 0]);
        assert_eq!(FockSpace::new(0, 0).unwrap().dim(), 1);
    }

    #[test]
    fn first_element_is_leftmost_filling() {
        let space = FockSpace::new(3, 6).unwrap();
        assert_eq!(space.dim(), 20);
        assert_eq!(space.state(0).occupations(), vec![1, 1, 1, 0, 0, 0]);
        assert_eq!(space.state(19).occupations(), vec![0, 0, 0, 1, 1, 1]);
    }

    // Independent oracle: all 2^M bit-vectors as explicit vectors, filtered
    // and sorted descending.
    #[test]
    fn matches_exhaustive_enumeration() {
        for modes in 0..=8usize {
            for n in 0..=modes {
                let mut expected: Vec<Vec<u8>> = (0..(1u32 << modes))
                    .map(|x| {
                        (0..modes)
                            .map(|i| ((x >> (modes - 1 - i)) & 1) as u8)
                            .collect::<Vec<u8>>()
                    })
                    .filter(|v| v.iter().map(|&b| b as usize).sum::<usize>() == n)
                    .collect();
                expected.sort();
                expected.reverse();
                let space = FockSpace::new(n, modes).unwrap();
                let got: Vec<Vec<u8>> = space.basis().iter().map(|s| s.occupations()).collect();
                assert_eq!(got, expected, "N={n} M={modes}");
                for (i, s) in space.basis().iter().enumerate() {
                    assert_eq!(space.index_of(s), Some(i));
                }
            }
        }
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            FockSpace::new(3, 2),
            Err(FermiError::InvalidShape(_))
        ));
        assert!(matches!(
            FockSpace::with_cap(3, 6, 19),
            Err(FermiError::DimensionCapExceeded { dim: 20, cap: 19 })
        ));
        assert!(FockSpace::with_cap(3, 6, 20).is_ok());
    }

    #[test]
    fn occupation_helpers() {
        let s = OccupationState::from_occupations(&[1, 0, 1, 1]).unwrap();
        assert_eq!(s.count_before(1), 0);
        assert_eq!(s.count_before(3), 1);
        assert_eq!(s.count_before(4), 2);
        assert_eq!(s.occupied_modes(), vec![1, 3, 4]);
        assert_eq!(format!("{s:?}"), "|1,0,1,1⟩");
        assert!(OccupationState::from_occupations(&[2]).is_err());
        assert!(OccupationState::from_modes(&[5], 4).is_err());
    }
}
