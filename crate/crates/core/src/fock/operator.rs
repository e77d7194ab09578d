use std::sync::Arc;

use num_complex::Complex64;

use super::basis::{FockSpace, DEFAULT_DIM_CAP};
use super::ladder::{Ladder, LadderMonomial, OperatorExpr};
use super::state::{same_space, StateVector};
use crate::error::{FermiError, Result};
use crate::linalg::{self, CMatrix};

/// Dense matrix of a number-conserving operator on one fixed-N space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    space: Arc<FockSpace>,
    matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(space: Arc<FockSpace>, matrix: CMatrix) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(FermiError::ShapeMismatch(format!(
                "{}x{} matrix on a space of dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: Arc<FockSpace>) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: CMatrix::identity(d, d),
        }
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

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermiticity_defect(&self.matrix) <= tol
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<Self> {
        same_space(&self.space, &rhs.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    pub fn commutator(&self, rhs: &OperatorMatrix) -> Result<Self> {
        same_space(&self.space, &rhs.space)?;
        Ok(Self {
            space: self.space.clone(),
            matrix: linalg::commutator(&self.matrix, &rhs.matrix),
        })
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        same_space(&self.space, psi.space())?;
        StateVector::new(self.space.clone(), &self.matrix * psi.amplitudes())
    }

    /// `⟨ψ|A|ψ⟩`
    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        same_space(&self.space, psi.space())?;
        Ok(psi.amplitudes().dotc(&(&self.matrix * psi.amplitudes())))
    }

    /// `⟨A²⟩ - ⟨A⟩²`, real part.
    pub fn variance(&self, psi: &StateVector) -> Result<f64> {
        let mean = self.expectation(psi)?;
        let a_psi = &self.matrix * psi.amplitudes();
        Ok(a_psi.norm_squared() - mean.norm_sqr())
    }
}

fn check_expr(expr: &OperatorExpr, modes: usize, shift: i64) -> Result<()> {
    for term in &expr.terms {
        term.check_modes(modes)?;
        if term.particle_shift() != shift {
            return Err(FermiError::NumberNonconserving {
                shift: term.particle_shift(),
                expected: shift,
            });
        }
    }
    Ok(())
}

/// Matrix elements `⟨u|expr|v⟩` with `v` in `from` and `u` in `to`. Every
/// monomial must move exactly `to.N - from.N` particles.
pub fn transition_matrix(expr: &OperatorExpr, from: &FockSpace, to: &FockSpace) -> Result<CMatrix> {
    if from.modes() != to.modes() {
        return Err(FermiError::ShapeMismatch(format!(
            "{} modes vs {} modes",
            from.modes(),
            to.modes()
        )));
    }
    let shift = to.particles() as i64 - from.particles() as i64;
    check_expr(expr, from.modes(), shift)?;
    let mut out = CMatrix::zeros(to.dim(), from.dim());
    for (col, &v) in from.basis().iter().enumerate() {
        for term in &expr.terms {
            if let Some((amp, u)) = term.act(v) {
                // number conservation was checked, so `u` is in `to`
                let row = to.index_of(&u).expect("image outside target sector");
                out[(row, col)] += amp;
            }
        }
    }
    Ok(out)
}

/// Dense matrix of a particle-number-conserving expression on `space`.
pub fn operator_matrix(expr: &OperatorExpr, space: &Arc<FockSpace>) -> Result<OperatorMatrix> {
    let matrix = transition_matrix(expr, space, space)?;
    Ok(OperatorMatrix {
        space: space.clone(),
        matrix,
    })
}

/// Image of `psi` under `expr`, which must shift particle number uniformly.
/// Returns `Ok(None)` when the target sector does not exist (N + shift
/// outside `[0, M]`), i.e. the image is identically zero.
pub fn apply_expr(psi: &StateVector, expr: &OperatorExpr) -> Result<Option<StateVector>> {
    let space = psi.space();
    let shift = match expr.terms.first() {
        Some(t) => t.particle_shift(),
        None => 0,
    };
    check_expr(expr, space.modes(), shift)?;
    let target = space.particles() as i64 + shift;
    if target < 0 || target > space.modes() as i64 {
        return Ok(None);
    }
    let to = if shift == 0 {
        space.clone()
    } else {
        Arc::new(FockSpace::with_cap(
            target as usize,
            space.modes(),
            DEFAULT_DIM_CAP.max(space.dim()),
        )?)
    };
    let m = transition_matrix(expr, space, &to)?;
    StateVector::new(to, m * psi.amplitudes()).map(Some)
}

/// `a_mode` or `a†_mode` applied to `psi`; see [`apply_expr`] for the `None`
/// case.
pub fn apply_ladder(psi: &StateVector, mode: usize, dagger: bool) -> Result<Option<StateVector>> {
    let expr = OperatorExpr::from(LadderMonomial::from_factors(vec![Ladder { mode, dagger }]));
    apply_expr(psi, &expr)
}
