use crate::bipartition::{BlockEmbedding, ModeBipartition};
use crate::error::Result;
use crate::fock::StateVector;
use crate::linalg;

use super::{Evidence, Status, Verdict};

/// Schmidt coefficients of `ψ` over the padded product space, descending.
pub fn schmidt_coefficients(psi: &StateVector, bp: &ModeBipartition) -> Result<Vec<f64>> {
    let embedding = BlockEmbedding::new(bp, psi.space())?;
    Ok(linalg::singular_values(&embedding.coefficient_matrix(psi)?))
}

/// Separable iff the padded coefficient matrix `C_{p,β}` has exactly one
/// singular value above `tol`, i.e. `C_{p,β} = C_p C'_β`.
pub fn pure_separability(psi: &StateVector, bp: &ModeBipartition, tol: f64) -> Result<Verdict> {
    psi.ensure_normalized()?;
    let values = schmidt_coefficients(psi, bp)?;
    let rank = values.iter().filter(|&&s| s > tol).count();
    let status = if rank == 1 {
        Status::Separable
    } else {
        Status::Entangled
    };
    Ok(Verdict {
        status,
        evidence: Evidence::SchmidtSpectrum {
            values: values.into_iter().filter(|&s| s > tol).collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::FermiError;
    use crate::fock::{FockSpace, OccupationState};
    use std::sync::Arc;

    #[test]
    fn fock_and_superposition() {
        let sp = Arc::new(FockSpace::new(1, 2).unwrap());
        let bp = ModeBipartition::new(1, 2).unwrap();
        let a = StateVector::fock(sp.clone(), &OccupationState::from_occupations(&[1, 0]).unwrap())
            .unwrap();
        let v = pure_separability(&a, &bp, 1e-10).unwrap();
        assert_eq!(v.status, Status::Separable);
        assert_eq!(v.evidence, Evidence::SchmidtSpectrum { values: vec![1.0] });

        let b = StateVector::fock(sp, &OccupationState::from_occupations(&[0, 1]).unwrap()).unwrap();
        let phi = a.add(&b).unwrap().normalized().unwrap();
        let v = pure_separability(&phi, &bp, 1e-10).unwrap();
        assert_eq!(v.status, Status::Entangled);
        let Evidence::SchmidtSpectrum { values } = v.evidence else { panic!() };
        assert!(values.iter().all(|s| (s - 0.5f64.sqrt()).abs() < 1e-15));

        assert!(matches!(
            pure_separability(&a.add(&b).unwrap(), &bp, 1e-10),
            Err(FermiError::NotNormalized(_))
        ));
    }
}
