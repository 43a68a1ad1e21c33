mod common;

use groupoid_core::action::{disjoint_union, is_action_morphism, regular_action, PartialActionTable};
use groupoid_core::globalization::*;
use groupoid_core::pair_groupoid;
use proptest::prelude::*;
use std::sync::Arc;

fn strict_partial(seed: u64, max_len: usize, max_points: usize) -> (PartialActionTable, PartialActionTable, Vec<usize>) {
    let mut rng = common::rng(seed);
    loop {
        let t = common::random_arc_groupoid(&mut rng, max_len);
        if let Some((p, amb, incl)) = common::random_partial_action(&mut rng, &t, max_points, true) {
            if p.is_strict() && amb.is_strict() {
                return (p, amb, incl);
            }
        }
    }
}

#[test]
fn identity_only_action_is_globalized_by_translation() {
    let g = Arc::new(pair_groupoid(&["x", "y"]).unwrap());
    let p = PartialActionTable::from_names("id", g.clone(), &["p"], &[("(x|x)", "p", "p")]).unwrap();
    let gl = globalize(&p).unwrap();
    assert_eq!(gl.beta.carrier_len(), 2);
    assert!(gl.beta.is_global());
    let nu = nu_embedding(&gl).unwrap();
    assert!(nu.is_injective());
}

#[test]
fn global_actions_are_their_own_globalization() {
    let t = Arc::new(groupoid_core::catalog::e8());
    let p = regular_action(t);
    let gl = globalize(&p).unwrap();
    assert_eq!(gl.beta.carrier_len(), p.carrier_len());
    let k = verify_universal(&gl, &p, &(0..p.carrier_len()).collect::<Vec<_>>()).unwrap();
    assert_eq!(k.len(), p.carrier_len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn globalization_invariants(seed in any::<u64>()) {
        let (p, amb, incl) = strict_partial(seed, 8, 4);
        let gl = globalize(&p).unwrap();
        prop_assert!(gl.beta.validate().passed());
        prop_assert!(gl.beta.is_global());
        prop_assert!(is_action_morphism(&gl.iota, &p, &gl.beta).unwrap());
        let mut seen = gl.iota.clone();
        seen.sort_unstable();
        seen.dedup();
        prop_assert_eq!(seen.len(), p.carrier_len());
        prop_assert!(gl.beta.carrier_len() >= p.carrier_len());
        prop_assert_eq!(gl.beta.carrier_len() == p.carrier_len(), p.is_global());
        let fd = check_full_dense(&gl).unwrap();
        prop_assert!(fd.full && fd.dense, "{}", fd.report);
        let nu = nu_embedding(&gl).unwrap();
        prop_assert!(nu.is_injective());

        // k = identity against β itself.
        let k = verify_universal(&gl, &gl.beta, &gl.iota).unwrap();
        prop_assert_eq!(k, (0..gl.beta.carrier_len()).collect::<Vec<_>>());
        // The ambient global action is another globalization.
        verify_universal(&gl, &amb, &incl).unwrap();
        // β next to an extra orbit: k is the inclusion.
        let extra = regular_action(p.groupoid().clone());
        let big = disjoint_union(&[gl.beta.clone(), extra], "big").unwrap();
        let k = verify_universal(&gl, &big, &gl.iota).unwrap();
        prop_assert_eq!(k, (0..gl.beta.carrier_len()).collect::<Vec<_>>());
    }

    #[test]
    fn globalizing_a_global_action_changes_nothing(seed in any::<u64>()) {
        let (p, _, _) = strict_partial(seed, 8, 4);
        let gl = globalize(&p).unwrap();
        let again = globalize(&gl.beta).unwrap();
        prop_assert_eq!(again.beta.carrier_len(), gl.beta.carrier_len());
        let mut image = again.iota.clone();
        image.sort_unstable();
        prop_assert_eq!(image, (0..gl.beta.carrier_len()).collect::<Vec<_>>());
    }

    #[test]
    fn enlarged_carrier_is_not_dense(seed in any::<u64>()) {
        let (p, _, _) = strict_partial(seed, 8, 4);
        let gl = globalize(&p).unwrap();
        let extra = regular_action(p.groupoid().clone());
        let big = disjoint_union(&[gl.beta.clone(), extra], "big").unwrap();
        let fd = check_full_dense_for(&gl.base, &big, &gl.iota).unwrap();
        prop_assert!(!fd.dense);
        prop_assert!(fd.report.has("dense"));
    }

    #[test]
    fn missing_images_give_no_mediating_morphism(seed in any::<u64>()) {
        let (p, _, _) = strict_partial(seed, 8, 4);
        prop_assume!(!p.is_global());
        let gl = globalize(&p).unwrap();
        // p itself is not global, so it cannot receive a morphism from β.
        let id: Vec<usize> = (0..p.carrier_len()).collect();
        prop_assert!(verify_universal(&gl, &p, &id).is_err());
    }
}
