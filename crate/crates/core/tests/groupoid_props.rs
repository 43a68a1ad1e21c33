mod common;

use groupoid_core::closure::{complete, complete_closure};
use groupoid_core::{build_connected_iso, catalog, GroupoidFunctor, GroupoidTable};
use proptest::prelude::*;
use std::sync::Arc;

fn chains_match_composability(t: &GroupoidTable, max: usize) {
    fn go(t: &GroupoidTable, chain: &mut Vec<usize>, max: usize) {
        if chain.len() >= 2 {
            let composable = chain.windows(2).all(|w| t.d(w[0]) == t.r(w[1]));
            assert_eq!(t.comp_chain(chain).is_some(), composable, "{}: {:?}", t.name(), chain);
        }
        if chain.len() == max {
            return;
        }
        for g in t.elements() {
            chain.push(g);
            go(t, chain, max);
            chain.pop();
        }
    }
    go(t, &mut Vec::new(), max);
}

#[test]
fn corpus_is_valid() {
    for t in common::corpus() {
        assert!(t.validate().passed(), "{}: {}", t.name(), t.validate());
    }
}

#[test]
fn chains_compose_iff_consecutive_ends_match() {
    for t in common::corpus() {
        let depth = if t.len() <= 8 { 4 } else { 3 };
        chains_match_composability(&t, depth);
    }
    chains_match_composability(&catalog::e8(), 4);
}

#[test]
fn printed_example_completes_to_e8() {
    let printed = catalog::example_printed();
    let partial = printed.build().unwrap();
    let rep = partial.validate();
    let u = partial.lookup("u").unwrap();
    let v = partial.lookup("v").unwrap();
    assert!(rep.with_tag("closure").any(|w| w.witness == ["u", "v"]));
    assert!(partial.comp(u, v).is_none());
    let full = complete(&printed).unwrap();
    assert_eq!(full.len(), 8);
    assert!(full.validate().passed());
    let b = full.comp(full.lookup("u").unwrap(), full.lookup("v").unwrap()).unwrap();
    assert_eq!(full.comp(b, b), full.index_of("y"));
}

#[test]
fn conflicting_declarations_fail_completion() {
    let mut b = catalog::example_printed();
    b.product("v", "u", "x");
    assert!(complete(&b).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn completion_is_idempotent(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_groupoid(&mut rng, 12);
        let once = complete_closure(&t).unwrap();
        prop_assert!(once.validate().passed());
        prop_assert_eq!(&once, &t);
        let twice = complete_closure(&once).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn connected_iso_round_trips(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = loop {
            let t = common::random_groupoid(&mut rng, 12);
            if t.is_connected() { break t; }
        };
        for &e in t.objects() {
            let iso = build_connected_iso(&t, e).unwrap();
            prop_assert!(iso.forward.is_isomorphism());
            let round = iso.backward.compose(&iso.forward).unwrap();
            prop_assert_eq!(round, GroupoidFunctor::identity(Arc::new(t.clone())));
            prop_assert_eq!(iso.product.factors()[1].len(), t.isotropy_group(e).unwrap().len());
        }
    }

    #[test]
    fn iso_subgroupoid_is_wide_union_of_isotropy(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let t = common::random_groupoid(&mut rng, 12);
        let iso = t.iso_subgroupoid();
        prop_assert!(groupoid_core::subgroupoid::is_wide(&t, &iso).unwrap());
        let total: usize = t.objects().iter().map(|&e| t.isotropy_group(e).unwrap().len()).sum();
        prop_assert_eq!(total, iso.len());
    }
}
