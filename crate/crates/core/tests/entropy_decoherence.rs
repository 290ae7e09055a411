mod common;

use common::*;
use proptest::prelude::*;
use qworlds::decoherence::*;
use qworlds::infometrics::*;
use qworlds::sampling::{random_product_unitary, random_unitary};
use qworlds::statecore::*;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn plus() -> StateVector {
    zero_state(1).unwrap().apply(&GateSpec::hadamard(0)).unwrap()
}

#[test]
fn non_orthogonal_ensemble_matches_closed_form() {
    let e = Ensemble::from_pairs([(0.5, zero_state(1).unwrap()), (0.5, plus())]).unwrap();
    let r = preparation_entropy(&e).unwrap();
    let (lo, hi) = eig2x2(&e.density().unwrap());
    assert!((r.von_neumann_bits - h_bits(&[lo, hi])).abs() < 1e-12);
    let p = (1.0 + FRAC_1_SQRT_2) / 2.0;
    assert!((r.von_neumann_bits - h_bits(&[p, 1.0 - p])).abs() < 1e-12);
    assert!((r.shannon_bits - 1.0).abs() < 1e-15);
    assert!(r.bound_satisfied);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn one_qubit_entropy_matches_quadratic(seed: u64, members in 1usize..5) {
        let e = random_ensemble(1, members, &mut seeded_rng(seed)).unwrap();
        let rho = e.density().unwrap();
        let (lo, hi) = eig2x2(&rho);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!((s - h_bits(&[lo.max(0.0), hi])).abs() < 1e-9);
    }

    #[test]
    fn entropy_ranges(n in 1usize..4, seed: u64, members in 1usize..6) {
        let e = random_ensemble(n, members, &mut seeded_rng(seed)).unwrap();
        let r = preparation_entropy(&e).unwrap();
        prop_assert!(r.von_neumann_bits >= -1e-12 && r.von_neumann_bits <= n as f64 + 1e-9);
        prop_assert!(r.shannon_bits >= 0.0 && r.shannon_bits <= (members as f64).log2() + 1e-12);
        prop_assert!(r.slack() >= -1e-9);
    }

    #[test]
    fn von_neumann_is_basis_independent(n in 1usize..4, seed: u64) {
        let mut rng = seeded_rng(seed);
        let e = random_ensemble(n, 3, &mut rng).unwrap();
        let u = random_unitary(1 << n, &mut rng);
        let gate = GateSpec::unitary((0..n).collect(), u);
        let rotated = Ensemble::from_pairs(
            e.members().iter().map(|m| (m.probability, m.state.apply(&gate).unwrap())),
        ).unwrap();
        let s0 = von_neumann_entropy(&e.density().unwrap()).unwrap();
        let s1 = von_neumann_entropy(&rotated.density().unwrap()).unwrap();
        prop_assert!((s0 - s1).abs() < 1e-9);
    }

    #[test]
    fn measurement_bound(seed: u64) {
        let mut rng = seeded_rng(seed);
        let psi = qworlds::sampling::random_state(2, &mut rng).unwrap();
        let basis = GateSpec::unitary(vec![0, 1], random_product_unitary(2, &mut rng));
        let r = measurement_entropy(&psi, &basis).unwrap();
        prop_assert!(r.von_neumann_bits.abs() < 1e-9);
        prop_assert!(r.shannon_bits >= r.von_neumann_bits - 1e-9);
        prop_assert!(r.shannon_bits <= 2.0 + 1e-12);
    }

    #[test]
    fn dephasing_preserves_trace_and_hermiticity(n in 1usize..4, seed: u64, gamma in 0.0f64..3.0, steps in 0usize..10) {
        let e = random_ensemble(n, 3, &mut seeded_rng(seed)).unwrap();
        let rho = e.density().unwrap();
        let out = dephase(&rho, gamma, steps).unwrap();
        prop_assert_eq!(out.len(), steps + 1);
        for r in &out {
            prop_assert!((r.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(r.hermiticity_deviation() < 1e-12);
            prop_assert_eq!(r.diagonal(), rho.diagonal());
        }
    }

    #[test]
    fn coupling_matches_product_formula(angles in prop::collection::vec(-PI..PI, 0..7), steps in 1usize..5) {
        let env = EnvironmentModel::new(angles.clone(), 0).unwrap();
        let run = entangle_environment(&plus(), &env, steps).unwrap();
        for (t, s) in run.iter().enumerate() {
            let expected = 0.5 * angles.iter().map(|th| (t as f64 * th / 2.0).cos().abs()).product::<f64>();
            prop_assert!((s.reduced.entry(0, 1).norm() - expected).abs() < 1e-10);
            prop_assert!((s.joint.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((s.reduced.trace().re - 1.0).abs() < 1e-12);
        }
        prop_assert!(run[1].reduced.purity() <= run[0].reduced.purity() + 1e-12);
    }

    #[test]
    fn dephasing_bridges_to_coupling(angles in prop::collection::vec(-PI..PI, 1..7), seed: u64) {
        let env = EnvironmentModel::new(angles, 0).unwrap();
        let psi = qworlds::sampling::random_state(1, &mut seeded_rng(seed)).unwrap();
        let coupled = entangle_environment(&psi, &env, 1).unwrap();
        let decay = env.one_step_decay();
        prop_assume!(decay > 0.0);
        let gamma = -decay.ln();
        let channel = dephase(&DensityMatrix::from_state(&psi), gamma, 1).unwrap();
        prop_assert!((coupled[1].reduced.entry(0, 1) - channel[1].entry(0, 1)).norm() < 1e-10);
    }
}

#[test]
fn diagonal_matrices_are_fixed_points() {
    let rho = DensityMatrix::mixture([(0.3, &zero_state(2).unwrap()), (0.7, &basis_state(2, 3).unwrap())]).unwrap();
    for r in dephase(&rho, 2.5, 20).unwrap() {
        assert_eq!(r, rho);
    }
}

#[test]
fn dephasing_closed_form() {
    let rho = DensityMatrix::from_state(&plus());
    let gamma = 0.173;
    let out = dephase(&rho, gamma, 100).unwrap();
    for (t, r) in out.iter().enumerate() {
        assert!((r.entry(0, 1).norm() - 0.5 * (-gamma * t as f64).exp()).abs() < 1e-12);
    }
}

#[test]
fn cat_state_before_and_after_coupling() {
    let cat = cat_state();
    let reduced = cat.reduced_density(&[1]).unwrap();
    assert!((von_neumann_entropy(&reduced).unwrap() - 1.0).abs() < 1e-12);

    let isolated = entangle_environment(&cat, &EnvironmentModel::none(), 24).unwrap();
    let before = branch_stability_default(&environment_coherence(&isolated)).unwrap();
    assert_eq!(before.classification, BranchClass::Coherent);

    let coupled = entangle_environment(&cat, &EnvironmentModel::binary_ladder(6), 24).unwrap();
    let after = branch_stability_default(&environment_coherence(&coupled)).unwrap();
    assert_eq!(after.classification, BranchClass::Branch);
    assert!(after.defaults_used);
}

#[test]
fn small_environment_recurs() {
    let env = EnvironmentModel::new(vec![PI, PI], 0).unwrap();
    let run = entangle_environment(&plus(), &env, 8).unwrap();
    let series = environment_coherence(&run);
    let values = series.values();
    assert!(values[1] < 1e-12);
    assert!((values[2] - 0.5).abs() < 1e-12);
    let report = branch_stability_default(&series).unwrap();
    assert_eq!(report.classification, BranchClass::WorldPointInTime);
}

#[test]
fn cap_on_environment() {
    let env = EnvironmentModel::binary_ladder(MAX_QUBITS);
    assert!(matches!(
        entangle_environment(&plus(), &env, 1),
        Err(qworlds::Error::QubitCap { .. })
    ));
}
