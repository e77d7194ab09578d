use itertools::Itertools;
use num_complex::Complex64;

use crate::bipartition::ModeBipartition;
use crate::error::{FermiError, Result};
use crate::fock::{DensityMatrix, Ladder, LadderMonomial};
use crate::linalg;
use crate::tolerance;

/// A product `A_1^o A_2^o` of odd local monomials with nonzero expectation.
#[derive(Clone, Debug, PartialEq)]
pub struct OddOddWitness {
    pub first: LadderMonomial,
    pub second: LadderMonomial,
    pub value: Complex64,
}

impl OddOddWitness {
    pub fn operator(&self) -> LadderMonomial {
        self.first.clone() * self.second.clone()
    }
}

/// Normal-ordered odd monomials `a†_S a_T` on `modes`, degree ascending, then
/// lexicographic with `a† < a` and lower modes first.
pub(crate) fn odd_monomials(modes: std::ops::RangeInclusive<usize>, max_degree: usize) -> Vec<LadderMonomial> {
    let alphabet: Vec<Ladder> = modes
        .clone()
        .map(Ladder::create)
        .chain(modes.map(Ladder::annihilate))
        .collect();
    (1..=max_degree.min(alphabet.len()))
        .step_by(2)
        .flat_map(|d| {
            alphabet
                .iter()
                .copied()
                .combinations(d)
                .map(LadderMonomial::from_factors)
        })
        .collect()
}

/// `Tr[ρ A]` through the action of `A` on basis vectors.
pub(crate) fn expectation(rho: &DensityMatrix, op: &LadderMonomial) -> Complex64 {
    let space = rho.space();
    let mut acc = linalg::ZERO;
    for (v, &state) in space.basis().iter().enumerate() {
        if let Some((amp, image)) = op.act(state) {
            if let Some(u) = space.index_of(&image) {
                acc += rho.matrix()[(v, u)] * amp;
            }
        }
    }
    acc
}

/// First product of odd monomials (degree ≤ `max_degree` per side) whose
/// expectation exceeds the witness threshold. Pairs that change the particle
/// number are skipped.
pub fn odd_odd_witness(
    rho: &DensityMatrix,
    bp: &ModeBipartition,
    max_degree: usize,
) -> Result<Option<OddOddWitness>> {
    bp.check_space(rho.space())?;
    if max_degree.is_multiple_of(2) {
        return Err(FermiError::InvalidShape(format!(
            "witness degree must be odd, got {max_degree}"
        )));
    }
    let first = odd_monomials(1..=bp.m(), max_degree);
    let second = odd_monomials(bp.m() + 1..=bp.modes(), max_degree);
    for a in &first {
        for b in &second {
            if a.particle_shift() + b.particle_shift() != 0 {
                continue;
            }
            let value = expectation(rho, &(a.clone() * b.clone()));
            if value.norm() > tolerance::WITNESS {
                return Ok(Some(OddOddWitness {
                    first: a.clone(),
                    second: b.clone(),
                    value,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockSpace, OccupationState, StateVector};
    use std::sync::Arc;

    #[test]
    fn monomial_order() {
        let names: Vec<String> = odd_monomials(1..=2, 3).iter().map(|m| m.to_string()).collect();
        assert_eq!(names[..4], ["a†1", "a†2", "a1", "a2"]);
        assert_eq!(names[4], "a†1 a†2 a1");
        assert_eq!(names.len(), 4 + 4);
    }

    #[test]
    fn superposition_witness() {
        let sp = Arc::new(FockSpace::new(1, 2).unwrap());
        let terms = [
            (OccupationState::from_occupations(&[1, 0]).unwrap(), linalg::ONE),
            (OccupationState::from_occupations(&[0, 1]).unwrap(), linalg::ONE),
        ];
        let rho = StateVector::from_terms(sp.clone(), &terms)
            .unwrap()
            .normalized()
            .unwrap()
            .to_density();
        let bp = ModeBipartition::new(1, 2).unwrap();
        let w = odd_odd_witness(&rho, &bp, 1).unwrap().unwrap();
        assert_eq!(w.operator().to_string(), "a†1 a2");
        assert!((w.value - Complex64::new(0.5, 0.0)).norm() < 1e-15);

        let fock = StateVector::fock(sp, &terms[0].0).unwrap().to_density();
        assert!(odd_odd_witness(&fock, &bp, 1).unwrap().is_none());
        assert!(odd_odd_witness(&fock, &bp, 2).is_err());
    }
}
