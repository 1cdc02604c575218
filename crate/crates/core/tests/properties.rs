//! Randomised invariants.

use proptest::prelude::*;
use reality_steer::channels::{apply_local_channel, random_channel};
use reality_steer::statevec::random::random_state;
use reality_steer::statevec::{
    partial_trace, rng_from_seed, trace_distance, Gate, RegisterLayout,
};

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..n).prop_map(Gate::X),
        (0..n).prop_map(Gate::H),
        (0..n, 0..n)
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Gate::cnot(a, b)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), gates in prop::collection::vec(gate_strategy(4), 0..20)) {
        let s = random_state(4, &mut rng_from_seed(seed)).unwrap();
        let out = s.apply_gates(&gates).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reduced_states_are_density_matrices(seed in any::<u64>()) {
        let layout = RegisterLayout::new(&[("A", 2), ("B", 1), ("C", 2)]).unwrap();
        let s = random_state(5, &mut rng_from_seed(seed)).unwrap();
        for keep in [["A"], ["B"], ["C"]] {
            let rho = partial_trace(&s, &layout, &keep).unwrap();
            prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(rho.eigenvalues().iter().all(|&l| l > -1e-10));
            prop_assert!(rho.purity() <= 1.0 + 1e-12);
        }
        // complementary parts of a pure state share their spectrum
        let a = partial_trace(&s, &layout, &["A"]).unwrap();
        let bc = partial_trace(&s, &layout, &["B", "C"]).unwrap();
        prop_assert!((a.von_neumann_entropy() - bc.von_neumann_entropy()).abs() < 1e-9);
    }

    #[test]
    fn local_channels_do_not_signal(seed in any::<u64>(), kraus in 1usize..5) {
        let layout = RegisterLayout::new(&[("C", 1), ("B", 2)]).unwrap();
        let s = random_state(3, &mut rng_from_seed(seed)).unwrap();
        let ch = random_channel(2, kraus, seed ^ 0x5555).unwrap();
        let after = apply_local_channel(&s, &layout, "B", &ch).unwrap();
        let d = trace_distance(
            &partial_trace(&s, &layout, &["C"]).unwrap(),
            &partial_trace(&after, &layout, &["C"]).unwrap(),
        ).unwrap();
        prop_assert!(d < 1e-10);
    }

    #[test]
    fn trace_distance_is_a_metric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let layout = RegisterLayout::new(&[("X", 1), ("Y", 2)]).unwrap();
        let rho = |seed| partial_trace(&random_state(3, &mut rng_from_seed(seed)).unwrap(), &layout, &["Y"]).unwrap();
        let (x, y, z) = (rho(a), rho(b), rho(c));
        let dxy = trace_distance(&x, &y).unwrap();
        prop_assert!((dxy - trace_distance(&y, &x).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&dxy));
        prop_assert!(dxy <= trace_distance(&x, &z).unwrap() + trace_distance(&z, &y).unwrap() + 1e-12);
        prop_assert!(trace_distance(&x, &x).unwrap() < 1e-12);
    }
}
