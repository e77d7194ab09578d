//! Phase estimation with collective mode operators: the symmetric
//! logarithmic derivative, the quantum Fisher information and the three
//! interferometric scenarios.
//!
//! A phase `θ` is imprinted as `ρ_θ = e^{iθJ} ρ e^{-iθJ}` and the attainable
//! precision is `δθ = 1/√F[ρ, J]`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bipartition::ModeBipartition;
use crate::entanglement::{classify, pure_separability, Status};
use crate::error::{FermiError, Result};
use crate::fock::{DensityMatrix, FockSpace, OccupationState, OperatorMatrix, StateVector};
use crate::linalg::{self, CMatrix};
use crate::operators::{bogolubov_pairwise, build_hamiltonian, build_j, Axis, Dispersion, SpectralWeights};
use crate::tolerance;

fn check_operator(rho: &DensityMatrix, j: &OperatorMatrix) -> Result<()> {
    check_pair(rho.space(), j)
}

fn check_pair(a: &FockSpace, j: &OperatorMatrix) -> Result<()> {
    let b = j.space();
    if a.particles() != b.particles() || a.modes() != b.modes() {
        return Err(FermiError::ShapeMismatch(format!(
            "state on (N={}, M={}), operator on (N={}, M={})",
            a.particles(),
            a.modes(),
            b.particles(),
            b.modes()
        )));
    }
    let defect = linalg::hermiticity_defect(j.matrix());
    if defect > tolerance::HERMITIAN {
        return Err(FermiError::NotHermitian(defect));
    }
    Ok(())
}

/// `e^{iθJ} ρ e^{-iθJ}`
pub fn evolve_phase(rho: &DensityMatrix, j: &OperatorMatrix, theta: f64) -> Result<DensityMatrix> {
    check_operator(rho, j)?;
    rho.conjugate(&linalg::unitary_exp(j.matrix(), theta))
}

/// Eigenvalues of `ρ` and `J` in the eigenbasis of `ρ`.
fn eigenframe(rho: &DensityMatrix, j: &OperatorMatrix) -> (Vec<f64>, CMatrix, CMatrix) {
    let (r, v) = linalg::hermitian_eigen(rho.matrix());
    let jr = v.adjoint() * j.matrix() * &v;
    (r, v, jr)
}

/// Solution of `½(ρL + Lρ) = -i[J, ρ]`, zero on pairs with
/// `r_i + r_j ≤ 1e-12`. This is the derivative of `e^{-iθJ} ρ e^{iθJ}`;
/// the family from [`evolve_phase`] has the opposite sign, `-L`, and the same
/// Fisher information.
pub fn sld(rho: &DensityMatrix, j: &OperatorMatrix) -> Result<CMatrix> {
    check_operator(rho, j)?;
    let (r, v, jr) = eigenframe(rho, j);
    let d = r.len();
    let l = CMatrix::from_fn(d, d, |a, b| {
        let sum = r[a] + r[b];
        if sum > tolerance::QFI_PAIR {
            Complex64::new(0.0, 2.0 * (r[a] - r[b]) / sum) * jr[(a, b)]
        } else {
            linalg::ZERO
        }
    });
    Ok(&v * l * v.adjoint())
}

/// `F = 2 Σ_{r_i + r_j > ε} (r_i - r_j)²/(r_i + r_j) |⟨r_i|J|r_j⟩|²`
pub fn qfi_with_cutoff(rho: &DensityMatrix, j: &OperatorMatrix, eps: f64) -> Result<f64> {
    check_operator(rho, j)?;
    let (r, _, jr) = eigenframe(rho, j);
    let mut f = 0.0;
    for a in 0..r.len() {
        for b in 0..r.len() {
            let sum = r[a] + r[b];
            if sum > eps {
                let diff = r[a] - r[b];
                f += diff * diff / sum * jr[(a, b)].norm_sqr();
            }
        }
    }
    Ok(2.0 * f)
}

pub fn qfi(rho: &DensityMatrix, j: &OperatorMatrix) -> Result<f64> {
    qfi_with_cutoff(rho, j, tolerance::QFI_PAIR)
}

/// `F = 4 Var_ψ(J)` for a pure state, without diagonalizing `|ψ⟩⟨ψ|`.
pub fn qfi_pure(psi: &StateVector, j: &OperatorMatrix) -> Result<f64> {
    check_pair(psi.space(), j)?;
    psi.ensure_normalized()?;
    let v = psi.amplitudes();
    let jv = j.matrix() * v;
    let mean = v.dotc(&jv).re;
    Ok(4.0 * (jv.norm_squared() - mean * mean))
}

/// `Tr[ρJ²] - Tr[ρJ]²`
pub fn variance(rho: &DensityMatrix, j: &OperatorMatrix) -> Result<f64> {
    check_operator(rho, j)?;
    let mean = rho.expectation(j.matrix()).re;
    let square = rho.expectation(&(j.matrix() * j.matrix())).re;
    Ok(square - mean * mean)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scenario {
    /// Fock input, first `N` modes filled, `J_x^{(1)}` with `ω_k = k^p`.
    Fock {
        n: usize,
        modes: usize,
        m: usize,
        p: u32,
        predicted: f64,
        separable: bool,
    },
    /// Same input seen through the pairwise Bogolubov rotation.
    Bogolubov {
        n: usize,
        modes: usize,
        m: usize,
        p: u32,
        qfi_transformed: f64,
        invariant: bool,
        transformed_entangled: bool,
    },
    /// `(|N;0⟩ + |0;N⟩)/√2` under `H = Σ Ω_k n_k`.
    Noon {
        n: usize,
        m: usize,
        omega: Vec<f64>,
        predicted: f64,
    },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QfiReport {
    pub qfi: f64,
    /// `F^{-1/2}`; `None` when `F = 0`.
    pub delta_theta: Option<f64>,
    /// `4 Δ²J`
    pub variance_bound: f64,
    /// `N`
    pub shot_noise_ref: f64,
    /// `N²`
    pub heisenberg_ref: f64,
    pub scenario: Scenario,
}

impl QfiReport {
    pub fn compute(rho: &DensityMatrix, j: &OperatorMatrix, scenario: Scenario) -> Result<Self> {
        let f = qfi(rho, j)?;
        let n = rho.space().particles() as f64;
        Ok(Self {
            qfi: f,
            delta_theta: (f > 0.0).then(|| f.sqrt().recip()),
            variance_bound: 4.0 * variance(rho, j)?,
            shot_noise_ref: n,
            heisenberg_ref: n * n,
            scenario,
        })
    }

    /// Same report for a pure state, using `F = 4 Var_ψ(J)`.
    pub fn compute_pure(psi: &StateVector, j: &OperatorMatrix, scenario: Scenario) -> Result<Self> {
        let f = qfi_pure(psi, j)?;
        let n = psi.space().particles() as f64;
        Ok(Self {
            qfi: f,
            delta_theta: (f > 0.0).then(|| f.sqrt().recip()),
            variance_bound: f,
            shot_noise_ref: n,
            heisenberg_ref: n * n,
            scenario,
        })
    }
}

fn check_fock_shape(n: usize, modes: usize) -> Result<()> {
    if !modes.is_multiple_of(2) || modes == 0 || 2 * n > modes {
        return Err(FermiError::InvalidShape(format!(
            "need even M and N ≤ M/2, got N={n}, M={modes}"
        )));
    }
    Ok(())
}

fn first_modes_filled(n: usize, modes: usize, space: &Arc<FockSpace>) -> Result<StateVector> {
    let occupied: Vec<usize> = (1..=n).collect();
    StateVector::fock(space.clone(), &OccupationState::from_modes(&occupied, modes)?)
}

fn fock_setup(n: usize, modes: usize, p: u32) -> Result<(StateVector, OperatorMatrix, ModeBipartition)> {
    check_fock_shape(n, modes)?;
    let space = Arc::new(FockSpace::new(n, modes)?);
    let bp = ModeBipartition::balanced(modes)?;
    let psi = first_modes_filled(n, modes, &space)?;
    let jx = build_j(Axis::X, 1, &SpectralWeights::power(modes / 2, p), &bp, &space)?;
    Ok((psi, jx, bp))
}

/// `Σ_{k=1}^N k^{2p}`
pub fn fock_prediction(n: usize, p: u32) -> f64 {
    (1..=n).map(|k| (k as f64).powi(2 * p as i32)).sum()
}

/// Fock input `|1_1 ... 1_N 0 ...⟩` with `J_x^{(1)}`, `ω_k = k^p`.
pub fn scenario_fock(n: usize, modes: usize, p: u32) -> Result<QfiReport> {
    let (psi, jx, bp) = fock_setup(n, modes, p)?;
    let separable = pure_separability(&psi, &bp, tolerance::RANK)?.status == Status::Separable;
    QfiReport::compute_pure(
        &psi,
        &jx,
        Scenario::Fock {
            n,
            modes,
            m: bp.m(),
            p,
            predicted: fock_prediction(n, p),
            separable,
        },
    )
}

/// The Fock scenario evaluated both as `(ψ, J_x^{(1)})` and as
/// `(Uψ, J_z^{(1)})`, with `U` the pairwise rotation.
pub fn scenario_bogolubov(n: usize, modes: usize, p: u32) -> Result<QfiReport> {
    let (psi, jx, bp) = fock_setup(n, modes, p)?;
    let space = psi.space().clone();
    let u = bogolubov_pairwise(&space, bp.m())?;
    let jz = build_j(Axis::Z, 1, &SpectralWeights::power(bp.m(), p), &bp, &space)?;
    let rotated = u.apply(&psi)?;
    let f_rotated = qfi_pure(&rotated, &jz)?;
    let transformed_entangled = classify(&rotated.to_density(), &bp)?.status == Status::Entangled;
    let mut report = QfiReport::compute_pure(&psi, &jx, Scenario::Custom)?;
    report.scenario = Scenario::Bogolubov {
        n,
        modes,
        m: bp.m(),
        p,
        qfi_transformed: f_rotated,
        invariant: (report.qfi - f_rotated).abs() < 1e-9,
        transformed_entangled,
    };
    Ok(report)
}

/// `(Σ_{k=1}^N (Ω_{m+k} - Ω_k))²`
pub fn noon_prediction(n: usize, m: usize, omega: &[f64]) -> f64 {
    let s: f64 = (0..n).map(|k| omega[m + k] - omega[k]).sum();
    s * s
}

/// `(|N;0⟩ + |0;N⟩)/√2` on `M = 2m` modes, filling modes `1..=N` and
/// `m+1..=m+N`, with `J = H = Σ Ω_k n_k`.
pub fn scenario_noon(n: usize, m: usize, dispersion: &Dispersion) -> Result<QfiReport> {
    if n == 0 || n > m {
        return Err(FermiError::InvalidShape(format!(
            "need 1 ≤ N ≤ m, got N={n}, m={m}"
        )));
    }
    let modes = 2 * m;
    if dispersion.values().len() != modes {
        return Err(FermiError::LengthMismatch {
            expected: modes,
            actual: dispersion.values().len(),
        });
    }
    let space = Arc::new(FockSpace::new(n, modes)?);
    let left: Vec<usize> = (1..=n).collect();
    let right: Vec<usize> = (m + 1..=m + n).collect();
    let phi = StateVector::from_terms(
        space.clone(),
        &[
            (OccupationState::from_modes(&left, modes)?, linalg::ONE),
            (OccupationState::from_modes(&right, modes)?, linalg::ONE),
        ],
    )?
    .normalized()?;
    let h = build_hamiltonian(dispersion, &space)?;
    QfiReport::compute_pure(
        &phi,
        &h,
        Scenario::Noon {
            n,
            m,
            omega: dispersion.values().to_vec(),
            predicted: noon_prediction(n, m, dispersion.values()),
        },
    )
}
