use proptest::prelude::*;

use schwarz::linalg::io::{format_matrix_market, parse_matrix_market};
use schwarz::linalg::{random, SparseMatrix};
use schwarz::smooth::Schedule;
use schwarz::verify::{error_propagator_dense, penalty_report_dense, smoother_matrix, PENALTY_TOL};

fn word() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('f'), Just('b')], 0..6).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution_and_reverses_products(s in word(), t in word()) {
        let s = Schedule::new(&s).unwrap();
        let t = Schedule::new(&t).unwrap();
        prop_assert_eq!(s.adjoint().adjoint(), s.clone());
        prop_assert_eq!(s.then(&t).adjoint(), t.adjoint().then(&s.adjoint()));
        prop_assert!(s.then(&s.adjoint()).is_self_adjoint());
    }

    #[test]
    fn adjoint_schedule_is_the_transpose(s in word(), seed in 0u64..1000) {
        prop_assume!(!s.is_empty());
        let a = random::random_sparse_spd(&mut random::rng(seed), 12, 3);
        let s = Schedule::new(&s).unwrap();
        let m = smoother_matrix(&s, &a).unwrap();
        let mt = smoother_matrix(&s.adjoint(), &a).unwrap();
        prop_assert!(mt.add_scaled(&m.transpose(), -1.0).max_abs() <= 1e-12 * m.max_abs());
    }

    #[test]
    fn matrix_market_round_trips(seed in 0u64..1000) {
        let a = random::random_sparse_spd(&mut random::rng(seed), 9, 2);
        for symmetric in [false, true] {
            let b = parse_matrix_market(&format_matrix_market(&a, symmetric)).unwrap();
            prop_assert_eq!(&b, &a);
        }
    }

    #[test]
    fn penalty_chain_holds(seed in 0u64..1000) {
        let mut rng = random::rng(seed);
        let a = SparseMatrix::from_dense(&random::random_spd(&mut rng, 8));
        let b = random::random_matrix(&mut rng, 8, 8);
        let p = penalty_report_dense(&error_propagator_dense(&b, &a).unwrap(), &a).unwrap();
        prop_assert!(p.holds(PENALTY_TOL), "{:?}", p);
    }
}
