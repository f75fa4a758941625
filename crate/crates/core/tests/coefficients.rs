use proptest::prelude::*;

use seqprove::nullstellensatz::{
    fk_coefficient, fk_coefficient_bruteforce, fk_degree, fk_target_coefficient, fk_target_coefficient_with,
    ExponentVector, Orientation,
};

fn orientation() -> impl Strategy<Value = Orientation> {
    prop_oneof![Just(Orientation::Ascending), Just(Orientation::Descending)]
}

/// Exponent vectors of the right total degree, spread over the k variables.
fn degree_matched(k: usize) -> impl Strategy<Value = ExponentVector> {
    let d = fk_degree(k) as usize;
    prop::collection::vec(0usize..k, d).prop_map(move |picks| {
        let mut e = vec![0u32; k];
        for i in picks {
            e[i] += 1;
        }
        ExponentVector(e)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn fast_matches_expansion_off_target(
        (k, e) in (3usize..=7).prop_flat_map(|k| (Just(k), degree_matched(k))),
        o in orientation(),
    ) {
        prop_assert_eq!(fk_coefficient(k, &e, o).unwrap(), fk_coefficient_bruteforce(k, &e, o).unwrap());
    }

    #[test]
    fn wrong_degree_is_zero(k in 3usize..=6, bump in 0usize..6, o in orientation()) {
        let mut e = ExponentVector::target(k);
        e.0[bump % k] += 1;
        prop_assert_eq!(fk_coefficient(k, &e, o).unwrap(), 0.into());
        prop_assert_eq!(fk_coefficient_bruteforce(k, &e, o).unwrap(), 0.into());
    }
}

#[test]
fn fast_matches_expansion_on_target() {
    for k in 3..=8 {
        let t = ExponentVector::target(k);
        for o in [Orientation::Ascending, Orientation::Descending] {
            assert_eq!(fk_coefficient(k, &t, o).unwrap(), fk_coefficient_bruteforce(k, &t, o).unwrap(), "k = {k}");
        }
    }
}

#[test]
fn orientations_differ_by_a_global_sign() {
    for k in 3..=16 {
        let a = fk_target_coefficient(k).unwrap();
        let d = fk_target_coefficient_with(k, Orientation::Descending).unwrap();
        let flip = (k * (k - 1) / 2) % 2 == 1;
        assert_eq!(a, if flip { -d.clone() } else { d.clone() }, "k = {k}");
    }
}

#[test]
fn expansion_refuses_large_k() {
    let t = ExponentVector::target(9);
    assert!(matches!(
        fk_coefficient_bruteforce(9, &t, Orientation::Ascending),
        Err(seqprove::Error::ResourceGuard(_))
    ));
}
