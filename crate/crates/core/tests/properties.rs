mod common;

use bqual_core::alignment::{similarity, similarity_total, AlignError, DEFAULT_THRESHOLD};
use bqual_core::lts::pairs_of;
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn similarity_equals_exhaustive_maximum(a in small_transitions(7), b in small_transitions(7)) {
        let v = clock_vars();
        let got = similarity(&set_of(&a), &set_of(&b), &v, DEFAULT_THRESHOLD).unwrap();
        prop_assert_eq!(got.total_agreement, brute_force_similarity(&a, &b, &v));
        let total: u64 = got.matching.iter().map(|m| m.weight as u64).sum();
        prop_assert_eq!(total, got.total_agreement);
        prop_assert_eq!(similarity_total(&set_of(&a), &set_of(&b), &v, DEFAULT_THRESHOLD).unwrap(), got.total_agreement);
    }

    #[test]
    fn pair_similarity_equals_exhaustive_maximum(a in small_transitions(6), b in small_transitions(6)) {
        let v = clock_vars();
        let (pa, pb) = (pairs_of(&set_of(&a)), pairs_of(&set_of(&b)));
        let got = similarity(&pa, &pb, &v, DEFAULT_THRESHOLD).unwrap().total_agreement;
        prop_assert_eq!(got, brute_force_similarity(&pa.sorted(), &pb.sorted(), &v));
    }

    #[test]
    fn matchings_are_injective(a in small_transitions(7), b in small_transitions(7)) {
        let v = clock_vars();
        let got = similarity(&set_of(&a), &set_of(&b), &v, DEFAULT_THRESHOLD).unwrap();
        let lefts: std::collections::BTreeSet<_> = got.matching.iter().map(|m| &m.left).collect();
        let rights: std::collections::BTreeSet<_> = got.matching.iter().map(|m| &m.right).collect();
        prop_assert_eq!(lefts.len(), got.matching.len());
        prop_assert_eq!(rights.len(), got.matching.len());
        prop_assert!(got.matching.iter().all(|m| m.weight > 0 && a.contains(&m.left) && b.contains(&m.right)));
    }

    #[test]
    fn metric_invariants(a in small_transitions(7), b in small_transitions(7)) {
        check_metric_properties(&a, &b).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn threshold_guard() {
    let v = clock_vars();
    let a: Vec<_> = (0..4).map(|i| tr(&v, [i, 0], "p", [i, 1])).collect();
    let b: Vec<_> = (0..4).map(|i| tr(&v, [i, 2], "p", [i, 3])).collect();
    assert!(matches!(
        similarity(&set_of(&a), &set_of(&b), &v, 3),
        Err(AlignError::TooLarge { left: 4, right: 4, threshold: 3 })
    ));
    // one small side is enough
    assert!(similarity(&set_of(&a), &set_of(&b[..3]), &v, 3).is_ok());
}
