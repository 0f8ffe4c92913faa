use proptest::prelude::*;
use rpq_core::matrix_model::{verify_bell_recursion, verify_det_property, verify_toy_duality, ToyParams};
use rpq_core::scalar::{int, ratio};
use rpq_core::w_single::{verify_antisymmetry, verify_deformed_numbers, verify_fock, verify_jacobi, Single};
use rpq_core::Deformation;

/// Pairs `0 < q < p < 1` with small denominators.
fn parameters() -> impl Strategy<Value = Deformation> {
    (2i64..8, 2i64..8)
        .prop_flat_map(|(dp, dq)| (1..dp, Just(dp), 1..dq, Just(dq)))
        .prop_filter("q < p", |(np, dp, nq, dq)| nq * dp < np * dq)
        .prop_map(|(np, dp, nq, dq)| Deformation::two_parameter(ratio(np, dp), ratio(nq, dq)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn deformed_numbers_are_consistent(d in parameters()) {
        let outcome = verify_deformed_numbers(&d, 6);
        prop_assert!(outcome.passed(), "{:?}", outcome);
    }

    #[test]
    fn fock_relations_hold(d in parameters()) {
        let outcome = verify_fock(&Single::new(d, 6));
        prop_assert!(outcome.passed(), "{:?}", outcome);
    }

    #[test]
    fn brackets_are_antisymmetric_and_satisfy_jacobi(d in parameters(), seed in any::<u64>()) {
        let s = Single::new(d, 12);
        let anti = verify_antisymmetry(&s, seed, 4, 4);
        prop_assert!(anti.passed(), "{:?}", anti);
        let jacobi = verify_jacobi(&s, seed, 3);
        prop_assert!(jacobi.passed(), "{:?}", jacobi);
    }

    #[test]
    fn bell_series_matches_recursion(k in 1usize..8) {
        prop_assert!(verify_bell_recursion(k, k).passed());
    }

    #[test]
    fn single_variable_determinant_multiplies_by_power(m in 1usize..4, x in prop_oneof![-3i64..0, 1i64..4]) {
        let outcome = verify_det_property(m, &[int(x)], 5);
        prop_assert!(outcome.passed(), "{:?}", outcome);
    }

    #[test]
    fn toy_constraint_origin_slice_holds(
        d in parameters(),
        a in 1u32..3,
        gamma in 0usize..2,
        m in 0usize..3,
        r in 1usize..4,
    ) {
        let params = ToyParams { a, gamma, m, r, order: 4, max_weight: 4 };
        let (_, origin) = verify_toy_duality(&d, &params);
        prop_assert!(origin.passed(), "{:?}", origin);
    }
}
