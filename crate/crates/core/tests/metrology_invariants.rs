mod common;

use fermient::bipartition::ModeBipartition;
use fermient::fock::{DensityMatrix, OperatorMatrix};
use fermient::linalg;
use fermient::metrology::{
    evolve_phase, qfi, qfi_pure, scenario_fock, scenario_noon, variance, QfiReport, Scenario,
};
use fermient::operators::{build_j, Axis, Dispersion, SpectralWeights};
use fermient::random::{self, StateRng};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use common::*;

const SHAPES: [(usize, usize); 4] = [(1, 2), (2, 4), (2, 5), (3, 6)];

fn random_operator(rng: &mut StateRng, sp: &std::sync::Arc<fermient::fock::FockSpace>) -> OperatorMatrix {
    OperatorMatrix::new(sp.clone(), random::hermitian(rng, sp.dim())).unwrap()
}

fn random_state(rng: &mut StateRng, sp: &std::sync::Arc<fermient::fock::FockSpace>) -> DensityMatrix {
    let rank = rng.random_range(1..=sp.dim());
    random::density_matrix(rng, sp, rank)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qfi_bounded_by_variance(idx in 0usize..SHAPES.len(), seed in any::<u64>()) {
        let (n, modes) = SHAPES[idx];
        let sp = space(n, modes);
        let mut rng = random::rng(seed);
        let j = random_operator(&mut rng, &sp);
        let rho = random_state(&mut rng, &sp);
        prop_assert!(qfi(&rho, &j).unwrap() <= 4.0 * variance(&rho, &j).unwrap() + 1e-9);
        let psi = random::pure_state(&mut rng, &sp);
        let f = qfi(&psi.to_density(), &j).unwrap();
        prop_assert!((f - 4.0 * variance(&psi.to_density(), &j).unwrap()).abs() < 1e-9);
        prop_assert!((f - qfi_pure(&psi, &j).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn qfi_is_convex(idx in 0usize..SHAPES.len(), seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let (n, modes) = SHAPES[idx];
        let sp = space(n, modes);
        let mut rng = random::rng(seed);
        let j = random_operator(&mut rng, &sp);
        let (a, b) = (random_state(&mut rng, &sp), random_state(&mut rng, &sp));
        let mix = DensityMatrix::mixture(&[(lambda, a.clone()), (1.0 - lambda, b.clone())]).unwrap();
        let bound = lambda * qfi(&a, &j).unwrap() + (1.0 - lambda) * qfi(&b, &j).unwrap();
        prop_assert!(qfi(&mix, &j).unwrap() <= bound + 1e-9);
    }

    #[test]
    fn qfi_is_unitarily_covariant(idx in 0usize..SHAPES.len(), seed in any::<u64>()) {
        let (n, modes) = SHAPES[idx];
        let sp = space(n, modes);
        let mut rng = random::rng(seed);
        let j = random_operator(&mut rng, &sp);
        let rho = random_state(&mut rng, &sp);
        let u = random::unitary(&mut rng, sp.dim());
        let moved = rho.conjugate(&u).unwrap();
        let ju = OperatorMatrix::new(sp.clone(), linalg::hermitian_part(&(&u * j.matrix() * u.adjoint()))).unwrap();
        prop_assert!((qfi(&moved, &ju).unwrap() - qfi(&rho, &j).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn qfi_is_independent_of_phase(idx in 0usize..SHAPES.len(), seed in any::<u64>()) {
        let (n, modes) = SHAPES[idx];
        let sp = space(n, modes);
        let mut rng = random::rng(seed);
        let j = random_operator(&mut rng, &sp);
        let rho = random_state(&mut rng, &sp);
        let f = qfi(&rho, &j).unwrap();
        for theta in [0.3, 1.7] {
            let evolved = evolve_phase(&rho, &j, theta).unwrap();
            prop_assert!((qfi(&evolved, &j).unwrap() - f).abs() < 1e-9);
        }
    }
}

#[test]
fn delta_theta_saturates_cramer_rao() {
    let mut rng = random::rng(31);
    for (n, modes) in SHAPES {
        let sp = space(n, modes);
        for _ in 0..10 {
            let j = random_operator(&mut rng, &sp);
            let report = QfiReport::compute(&random_state(&mut rng, &sp), &j, Scenario::Custom).unwrap();
            let dt = report.delta_theta.unwrap();
            assert!((dt * report.qfi.sqrt() - 1.0).abs() < 1e-12);
            assert_eq!(report.shot_noise_ref, n as f64);
            assert_eq!(report.heisenberg_ref, (n * n) as f64);
        }
    }
}

#[test]
fn phase_derivative_matches_commutator() {
    let mut rng = random::rng(32);
    let h = 1e-5;
    for (n, modes) in SHAPES {
        let sp = space(n, modes);
        let j = random_operator(&mut rng, &sp);
        let rho = random_state(&mut rng, &sp);
        let plus = evolve_phase(&rho, &j, h).unwrap();
        let minus = evolve_phase(&rho, &j, -h).unwrap();
        let derivative = (plus.matrix() - minus.matrix()) / Complex64::new(2.0 * h, 0.0);
        let expected = linalg::commutator(j.matrix(), rho.matrix()) * Complex64::new(0.0, 1.0);
        assert!(linalg::max_abs(&(derivative - expected)) < 1e-8);
    }
}

#[test]
fn pure_qfi_matches_fidelity_expansion() {
    let mut rng = random::rng(33);
    let delta = 1e-4;
    for (n, modes) in SHAPES {
        let sp = space(n, modes);
        let j = random_operator(&mut rng, &sp);
        let psi = random::pure_state(&mut rng, &sp);
        let moved = evolve_phase(&psi.to_density(), &j, delta).unwrap();
        // |⟨ψ|ψ_δ⟩|² = ⟨ψ|ρ_δ|ψ⟩
        let overlap = (psi.amplitudes().adjoint() * moved.matrix() * psi.amplitudes())[(0, 0)].re;
        let estimate = 8.0 * (1.0 - overlap.sqrt()) / (delta * delta);
        let f = qfi(&psi.to_density(), &j).unwrap();
        assert!((estimate - f).abs() < 1e-4 * f.max(1.0), "{estimate} vs {f}");
    }
}

#[test]
fn fock_and_noon_references() {
    for n in 1..=4usize {
        for p in 0..=2u32 {
            let r = scenario_fock(n, 2 * n, p).unwrap();
            let oracle: u64 = (1..=n as u64).map(|k| k.pow(2 * p)).sum();
            assert!((r.qfi - oracle as f64).abs() < 1e-9 * oracle as f64);
            assert!(matches!(r.scenario, Scenario::Fock { separable: true, .. }));
        }
        let noon = scenario_noon(n, n, &Dispersion::linear(2 * n)).unwrap();
        assert!((noon.qfi - (n * n * n * n) as f64).abs() < 1e-9 * (n * n * n * n) as f64);
    }
}

#[test]
fn mixtures_of_sectors_lower_qfi() {
    // J_x on a product Fock input mixed with the maximally mixed state
    let sp = space(2, 4);
    let bp = ModeBipartition::balanced(4).unwrap();
    let jx = build_j(Axis::X, 1, &SpectralWeights::power(2, 1), &bp, &sp).unwrap();
    let psi = fermient::fock::StateVector::fock(sp.clone(), &sp.state(0)).unwrap().to_density();
    let mix = DensityMatrix::maximally_mixed(sp.clone());
    let pure_f = qfi(&psi, &jx).unwrap();
    let mut last = pure_f;
    for step in 1..=10 {
        let lambda = 1.0 - step as f64 / 10.0;
        let rho = DensityMatrix::mixture(&[(lambda, psi.clone()), (1.0 - lambda, mix.clone())]).unwrap();
        let f = qfi(&rho, &jx).unwrap();
        assert!(f <= last + 1e-12);
        last = f;
    }
    assert!(last.abs() < 1e-12);
}
