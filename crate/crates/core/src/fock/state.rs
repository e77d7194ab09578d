use std::sync::Arc;

use num_complex::Complex64;

use super::basis::{FockSpace, OccupationState};
use crate::error::{FermiError, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::tolerance;

/// Pure state expanded in the Fock basis of its space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: Arc<FockSpace>,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(space: Arc<FockSpace>, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(FermiError::LengthMismatch {
                expected: space.dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn zeros(space: Arc<FockSpace>) -> Self {
        let amplitudes = CVector::zeros(space.dim());
        Self { space, amplitudes }
    }

    /// Basis vector `|occupations⟩`.
    pub fn fock(space: Arc<FockSpace>, state: &OccupationState) -> Result<Self> {
        let i = space.index_of(state).ok_or_else(|| {
            FermiError::InvalidShape(format!(
                "{state:?} is not in the N={} M={} space",
                space.particles(),
                space.modes()
            ))
        })?;
        let mut out = Self::zeros(space);
        out.amplitudes[i] = linalg::ONE;
        Ok(out)
    }

    /// Superposition of basis vectors; repeated entries accumulate. Not
    /// normalized.
    pub fn from_terms(
        space: Arc<FockSpace>,
        terms: &[(OccupationState, Complex64)],
    ) -> Result<Self> {
        let mut out = Self::zeros(space);
        for (state, amp) in terms {
            let i = out.space.index_of(state).ok_or_else(|| {
                FermiError::InvalidShape(format!("{state:?} is not in the target space"))
            })?;
            out.amplitudes[i] += amp;
        }
        Ok(out)
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, state: &OccupationState) -> Complex64 {
        self.space
            .index_of(state)
            .map(|i| self.amplitudes[i])
            .unwrap_or(linalg::ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance::NORM
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(FermiError::NotNormalized(self.norm_sqr()))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(FermiError::NotNormalized(norm * norm));
        }
        Ok(Self {
            space: self.space.clone(),
            amplitudes: &self.amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_space(other.space())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.check_same_space(other.space())?;
        Ok(Self {
            space: self.space.clone(),
            amplitudes: &self.amplitudes + &other.amplitudes,
        })
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        Self {
            space: self.space.clone(),
            amplitudes: &self.amplitudes * c,
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            space: self.space.clone(),
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }

    pub(crate) fn check_same_space(&self, other: &FockSpace) -> Result<()> {
        same_space(&self.space, other)
    }
}

pub(crate) fn same_space(a: &FockSpace, b: &FockSpace) -> Result<()> {
    if a.particles() == b.particles() && a.modes() == b.modes() {
        Ok(())
    } else {
        Err(FermiError::ShapeMismatch(format!(
            "(N={}, M={}) vs (N={}, M={})",
            a.particles(),
            a.modes(),
            b.particles(),
            b.modes()
        )))
    }
}

/// Density matrix on a fixed-N Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: Arc<FockSpace>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace, positive semidefinite.
    pub fn new(space: Arc<FockSpace>, matrix: CMatrix) -> Result<Self> {
        let rho = Self::new_unchecked(space, matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape check only. Used for intermediate objects that are not states.
    pub fn new_unchecked(space: Arc<FockSpace>, matrix: CMatrix) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(FermiError::ShapeMismatch(format!(
                "matrix is {}x{}, space has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermiticity_defect(&self.matrix);
        if herm > tolerance::HERMITIAN {
            return Err(FermiError::InvalidDensityMatrix(format!(
                "not Hermitian (defect {herm:e})"
            )));
        }
        let tr = linalg::trace(&self.matrix);
        if (tr.re - 1.0).abs() > tolerance::TRACE || tr.im.abs() > tolerance::TRACE {
            return Err(FermiError::InvalidDensityMatrix(format!(
                "trace is {tr}, expected 1"
            )));
        }
        if let Some(&min) = linalg::hermitian_eigenvalues(&self.matrix).first() {
            if min < -tolerance::PSD {
                return Err(FermiError::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(())
    }

    /// `1/D` on every basis vector.
    pub fn maximally_mixed(space: Arc<FockSpace>) -> Self {
        let d = space.dim();
        let matrix = CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
        Self { space, matrix }
    }

    /// Convex combination `Σ w_i ρ_i`; weights must be non-negative and sum
    /// to one within `1e-9`.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| FermiError::InvalidDensityMatrix("empty mixture".into()))?;
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0 || !w.is_finite())
            || (total - 1.0).abs() > tolerance::MIXTURE_WEIGHTS
        {
            return Err(FermiError::InvalidDensityMatrix(format!(
                "mixture weights must be non-negative and sum to 1 (sum {total})"
            )));
        }
        let space = first.1.space.clone();
        let mut matrix = CMatrix::zeros(space.dim(), space.dim());
        for (w, rho) in components {
            same_space(&space, &rho.space)?;
            matrix += &rho.matrix * Complex64::new(*w, 0.0);
        }
        Ok(Self { space, matrix })
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    /// Dominant eigenvector when the state is pure to within
    /// `tolerance::RANK`, otherwise `None`.
    pub fn as_pure(&self) -> Option<StateVector> {
        if (1.0 - self.purity()).abs() > tolerance::RANK {
            return None;
        }
        let (values, vectors) = linalg::hermitian_eigen(&self.matrix);
        let last = values.len().checked_sub(1)?;
        let column = vectors.column(last).into_owned();
        // fix the global phase on the largest component for reproducibility
        let (imax, _) = column
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        let phase = column[imax].conj() / column[imax].norm();
        StateVector::new(self.space.clone(), column * phase).ok()
    }

    /// `U ρ U†`
    pub fn conjugate(&self, unitary: &CMatrix) -> Result<Self> {
        if unitary.nrows() != self.space.dim() || unitary.ncols() != self.space.dim() {
            return Err(FermiError::ShapeMismatch("unitary has wrong shape".into()));
        }
        Ok(Self {
            space: self.space.clone(),
            matrix: unitary * &self.matrix * unitary.adjoint(),
        })
    }

    /// `Tr[ρ A]`
    pub fn expectation(&self, operator: &CMatrix) -> Complex64 {
        (&self.matrix * operator).trace()
    }
}
