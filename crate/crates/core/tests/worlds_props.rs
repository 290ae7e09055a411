mod common;

use common::*;
use proptest::prelude::*;
use qworlds::algorithms::*;
use qworlds::oracle::BooleanFunction;
use qworlds::sampling::random_unitary;
use qworlds::statecore::*;
use qworlds::worlds::*;

fn layout(na: usize, nb: usize) -> RegisterLayout {
    RegisterLayout::new(na, nb).unwrap()
}

/// Random state with some register-A labels zeroed, so worlds are sparse.
fn sparse_state(na: usize, nb: usize, seed: u64, drop_mask: u64) -> StateVector {
    let psi = rand_state(na + nb, seed);
    let dim_b = 1 << nb;
    let mut amps = psi.into_amplitudes();
    let labels = 1usize << na;
    for label in 0..labels - 1 {
        if drop_mask & (1 << label) != 0 {
            for a in &mut amps[label * dim_b..(label + 1) * dim_b] {
                *a = zero();
            }
        }
    }
    StateVector::normalized(amps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reconstruction_and_weight_conservation(na in 1usize..4, nb in 0usize..3, seed: u64, drop: u64) {
        let psi = sparse_state(na, nb, seed, drop);
        let d = decompose(&psi, &layout(na, nb), DEFAULT_WORLD_THRESHOLD).unwrap();
        prop_assert!(d.reconstruction_fidelity(&psi).unwrap() >= 1.0 - 1e-10);
        prop_assert!((d.total_weight() + d.residual - 1.0).abs() < 1e-10);
    }

    #[test]
    fn world_vectors_are_orthogonal(na in 1usize..4, nb in 0usize..3, seed: u64) {
        let psi = rand_state(na + nb, seed);
        let d = decompose(&psi, &layout(na, nb), DEFAULT_WORLD_THRESHOLD).unwrap();
        for i in 0..d.world_count() {
            for j in i + 1..d.world_count() {
                prop_assert!(d.world_vector(i).inner_product(&d.world_vector(j)).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn register_b_errors_act_on_every_world_alike(na in 1usize..4, nb in 1usize..3, seed: u64, useed: u64) {
        let l = layout(na, nb);
        let psi = rand_state(na + nb, seed);
        let e = random_unitary(1 << nb, &mut seeded_rng(useed));
        let hit = psi.apply(&GateSpec::unitary(l.register_b(), e.clone())).unwrap();
        let before = decompose(&psi, &l, DEFAULT_WORLD_THRESHOLD).unwrap();
        let after = decompose(&hit, &l, DEFAULT_WORLD_THRESHOLD).unwrap();
        prop_assert_eq!(before.labels(), after.labels());
        let dim_b = 1 << nb;
        let rows: Vec<Vec<Amplitude>> = (0..dim_b).map(|r| e[r * dim_b..(r + 1) * dim_b].to_vec()).collect();
        for (w0, w1) in before.worlds.iter().zip(&after.worlds) {
            prop_assert!((w0.weight - w1.weight).abs() < 1e-12);
            let expected = StateVector::from_amplitudes(matvec(&rows, w0.relative_state.amplitudes())).unwrap();
            prop_assert!((expected.fidelity(&w1.relative_state).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn measuring_labels_selects_a_world(na in 1usize..4, nb in 0usize..3, seed: u64, mseed: u64) {
        let l = layout(na, nb);
        let psi = rand_state(na + nb, seed);
        let d = decompose(&psi, &l, DEFAULT_WORLD_THRESHOLD).unwrap();
        let m = measure_qubits(&psi, &l.register_a(), mseed).unwrap();
        let world = d.worlds.iter().find(|w| w.label_index == m.outcome).unwrap();
        prop_assert!((m.probability - world.weight).abs() < 1e-12);
        let post = decompose(&m.post_state, &l, DEFAULT_WORLD_THRESHOLD).unwrap();
        prop_assert_eq!(post.world_count(), 1);
        prop_assert!((post.worlds[0].relative_state.fidelity(&world.relative_state).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_gates_keep_world_count(n in 1usize..4, fseed: u64, seed: u64, theta in -3.0f64..3.0) {
        let l = layout(n, 1);
        let f = BooleanFunction::random(n, &mut seeded_rng(fseed)).unwrap();
        let psi = rand_state(n + 1, seed);
        let d = decompose(&psi, &l, DEFAULT_WORLD_THRESHOLD).unwrap();
        for g in [GateSpec::oracle(f.clone(), l), GateSpec::ry(n, theta)] {
            let m = interference_matrix(&d, &g).unwrap();
            prop_assert!(m.is_world_diagonal(DIAGONAL_TOLERANCE));
            for s in m.row_sums() {
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
            let after = decompose(&psi.apply(&g).unwrap(), &l, DEFAULT_WORLD_THRESHOLD).unwrap();
            prop_assert_eq!(after.world_count(), d.world_count());
        }
    }
}

#[test]
fn deutsch_trace_shape() {
    for table in ["00", "01", "10", "11"] {
        let r = deutsch_run(&table.parse().unwrap(), 3).unwrap();
        let t = track(&r.trace, &r.layout, DEFAULT_WORLD_THRESHOLD).unwrap();
        assert_eq!(t.world_counts()[..4], [1, 2, 2, 1]);
        assert_eq!(t.count_events(EventKind::Split), 1);
        assert_eq!(t.count_events(EventKind::Merge), 1);
        assert!(t.reappearances.is_empty());
    }
}

#[test]
fn dj_two_bit_trace() {
    let (trace, l) = pipeline_trace(&"1111".parse().unwrap(), 0).unwrap();
    let t = track(&trace, &l, DEFAULT_WORLD_THRESHOLD).unwrap();
    assert_eq!(t.world_counts()[..4], [1, 4, 4, 1]);
}

#[test]
fn audits() {
    let f: BooleanFunction = "01101001".parse().unwrap();
    let (trace, l) = pipeline_trace(&f, 0).unwrap();
    assert_eq!(audit_information(&trace, &l).unwrap().worlds_max, 8);

    let (classical, cl) = classical_query_trace(&"01".parse().unwrap(), 1).unwrap();
    let a = audit_information(&classical, &cl).unwrap();
    assert_eq!(a.worlds_max, 1);
}
