mod common;

use codeq::FieldElement;
use common::*;
use proptest::prelude::*;

fn any_field() -> impl Strategy<Value = u64> {
    prop::sample::select(field_orders())
}

/// (q, n, rows, seed) for random codes small enough to enumerate.
fn small_code() -> impl Strategy<Value = (u64, usize, usize, u64)> {
    (prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), 1usize..=12, 0usize..=5, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms_hold(q in any_field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field(q);
        let r = field_axioms(&f, FieldElement(a % q), FieldElement(b % q), FieldElement(c % q));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn cosets_partition(n in 1u64..=120, q in any_field()) {
        let r = coset_partition(n, q);
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn rref_is_idempotent((q, n, rows, seed) in small_code()) {
        let r = rref_idempotent(&random_code(q, n, rows, seed));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn duals_are_involutions((q, n, rows, seed) in small_code()) {
        let r = dual_involution(&random_code(q, n, rows, seed));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }

    #[test]
    fn monomial_maps_keep_weights((q, n, rows, seed) in small_code()) {
        let c = random_code(q, n, rows, seed);
        let r = monomial_weight_invariance(&c, &random_monomial(q, n, seed));
        prop_assert!(r.is_ok(), "{}", r.unwrap_err());
    }
}
