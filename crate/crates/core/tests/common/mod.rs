//! Shared generators for integration tests: small groupoids, automorphism
//! actions, partial actions, star-injective functors and morphisms.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use groupoid_core::action::{disjoint_union as action_union, restrict_to_subset};
use groupoid_core::catalog;
use groupoid_core::groupoid::disjoint_union;
use groupoid_core::product::direct_product;
use groupoid_core::subgroupoid::generated_subgroupoid;
use groupoid_core::{
    pair_groupoid, AutAction, ElementSet, GroupoidFunctor, GroupoidTable, PartialActionTable, RawTable,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_groups() -> Vec<GroupoidTable> {
    let mut out: Vec<GroupoidTable> = (1..=6).map(catalog::cyclic).collect();
    out.push(catalog::klein());
    out.push(catalog::symmetric(3));
    out
}

fn pair_on(k: usize) -> GroupoidTable {
    let names: Vec<String> = (0..k).map(|i| format!("o{i}")).collect();
    pair_groupoid(&names).unwrap()
}

/// `pair(k) × H`, the shape of every connected finite groupoid.
pub fn connected(k: usize, h: &GroupoidTable) -> GroupoidTable {
    direct_product(&[pair_on(k), h.clone()]).unwrap().into_table()
}

/// Fixed corpus of groupoids with at most 12 elements.
pub fn corpus() -> Vec<GroupoidTable> {
    let z2 = catalog::cyclic(2);
    let z3 = catalog::cyclic(3);
    let mut out = vec![
        catalog::cyclic(1),
        z2.clone(),
        z3.clone(),
        catalog::cyclic(4),
        catalog::cyclic(6),
        catalog::klein(),
        catalog::symmetric(3),
        catalog::dihedral(4),
        pair_on(2),
        pair_on(3),
        catalog::e8(),
        connected(2, &z3),
        direct_product(&[z2.clone(), catalog::cyclic(4)]).unwrap().into_table(),
        direct_product(&[z2.clone(), z2.clone(), z2.clone()]).unwrap().into_table(),
        disjoint_union(&[z2.clone(), z2.clone()], "Z2+Z2").unwrap(),
        disjoint_union(&[z2.clone(), pair_on(2)], "Z2+P2").unwrap(),
        disjoint_union(&[z3.clone(), pair_on(2), catalog::cyclic(1)], "Z3+P2+1").unwrap(),
        disjoint_union(&[pair_on(2), pair_on(2)], "P2+P2").unwrap(),
    ];
    for t in &mut out {
        assert!(t.len() <= 12, "{}", t.name());
        assert!(t.validate().passed());
    }
    out
}

/// Reorders and renames elements; returns the new table and the
/// isomorphism from `t` onto it.
pub fn scramble<R: Rng>(t: &GroupoidTable, rng: &mut R) -> (GroupoidTable, GroupoidFunctor) {
    let n = t.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // order[new] = old
    let mut pos = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let raw = RawTable {
        name: format!("{}'", t.name()),
        elements: order.iter().map(|&old| format!("s{}", t.name_of(old))).collect(),
        objects: t.objects().iter().map(|&o| pos[o]).collect(),
        dom: order.iter().map(|&old| pos[t.d(old)]).collect(),
        rng: order.iter().map(|&old| pos[t.r(old)]).collect(),
        inv: order.iter().map(|&old| pos[t.inv(old)]).collect(),
        comp: t.defined_products().map(|(g, h, k)| (pos[g], pos[h], pos[k])).collect(),
    };
    let s = GroupoidTable::from_raw(raw).unwrap();
    let f = GroupoidFunctor::new(Arc::new(t.clone()), Arc::new(s.clone()), pos).unwrap();
    (s, f)
}

/// A random groupoid with at most `max_len` elements: a disjoint union of
/// components `pair(k) × H`, scrambled.
pub fn random_groupoid<R: Rng>(rng: &mut R, max_len: usize) -> GroupoidTable {
    let groups = small_groups();
    let mut parts = Vec::new();
    let mut budget = max_len;
    loop {
        let options: Vec<(usize, &GroupoidTable)> = (1..=3)
            .flat_map(|k| groups.iter().map(move |h| (k, h)))
            .filter(|(k, h)| k * k * h.len() <= budget)
            .collect();
        if options.is_empty() || (!parts.is_empty() && rng.gen_bool(0.5)) {
            break;
        }
        let &(k, h) = options.choose(rng).unwrap();
        budget -= k * k * h.len();
        parts.push(connected(k, h));
    }
    let t = if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        disjoint_union(&parts, "U").unwrap()
    };
    scramble(&t, rng).0
}

/// Every automorphism of `t`, by backtracking over element images.
pub fn automorphisms(t: &GroupoidTable) -> Vec<Vec<usize>> {
    fn go(t: &GroupoidTable, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, i: usize, out: &mut Vec<Vec<usize>>) {
        let n = t.len();
        if i == n {
            out.push(map.iter().map(|m| m.unwrap()).collect());
            return;
        }
        for c in 0..n {
            if used[c] || t.is_object(i) != t.is_object(c) {
                continue;
            }
            map[i] = Some(c);
            let consistent = (0..=i).all(|g| {
                let mg = map[g].unwrap();
                let check = |a: usize, b: usize| map[a].is_none_or(|ma| ma == b);
                check(t.d(g), t.d(mg))
                    && check(t.r(g), t.r(mg))
                    && check(t.inv(g), t.inv(mg))
                    && (0..=i).all(|h| match t.comp(g, h) {
                        Some(k) => {
                            let mh = map[h].unwrap();
                            match (map[k], t.comp(mg, mh)) {
                                (Some(mk), Some(p)) => mk == p,
                                (None, Some(_)) => true,
                                _ => false,
                            }
                        }
                        None => true,
                    })
            });
            if consistent {
                used[c] = true;
                go(t, map, used, i + 1, out);
                used[c] = false;
            }
            map[i] = None;
        }
    }
    let mut out = Vec::new();
    go(t, &mut vec![None; t.len()], &mut vec![false; t.len()], 0, &mut out);
    out
}

/// A minimal generating list of a group (one-object table), greedy.
pub fn generators(g: &GroupoidTable) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: ElementSet = g.object_set();
    for x in g.elements() {
        if !span.contains(&x) {
            gens.push(x);
            let mut s = span.clone();
            s.insert(x);
            span = generated_subgroupoid(g, &s);
        }
    }
    gens
}

/// All homomorphisms `group → auts` (as permutations composed pointwise),
/// up to `cap` of them.
pub fn homomorphisms(group: &GroupoidTable, auts: &[Vec<usize>], cap: usize) -> Vec<Vec<Vec<usize>>> {
    let gens = generators(group);
    let m = auts[0].len();
    let id: Vec<usize> = (0..m).collect();
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        // Extend the generator images along words, checking consistency.
        let mut img: Vec<Option<Vec<usize>>> = vec![None; group.len()];
        img[group.objects()[0]] = Some(id.clone());
        let mut ok = true;
        let mut frontier = vec![group.objects()[0]];
        while let Some(w) = frontier.pop() {
            for (gi, &s) in gens.iter().enumerate() {
                let p = group.comp(s, w).unwrap();
                let v = compose(&auts[choice[gi]], img[w].as_ref().unwrap());
                match &img[p] {
                    Some(existing) if *existing != v => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        img[p] = Some(v);
                        frontier.push(p);
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            let full: Vec<Vec<usize>> = img.into_iter().map(|v| v.unwrap()).collect();
            let hom = group
                .defined_products()
                .all(|(a, b, ab)| full[ab] == compose(&full[a], &full[b]));
            if hom {
                out.push(full);
                if out.len() >= cap {
                    return out;
                }
            }
        }
        // next choice (odometer)
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < auts.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// A random valid automorphism action of a small group on a random
/// groupoid with at most `max_len` elements.
pub fn random_aut_action<R: Rng>(rng: &mut R, max_len: usize) -> AutAction {
    loop {
        let t = random_groupoid(rng, max_len);
        let auts = automorphisms(&t);
        let groups = small_groups();
        let group = groups.choose(rng).unwrap().clone();
        let homs = homomorphisms(&group, &auts, 64);
        if homs.is_empty() {
            continue;
        }
        let omega = homs.choose(rng).unwrap().clone();
        return AutAction::new(Arc::new(group), Arc::new(t), omega).unwrap();
    }
}

/// The global action of `G` on left cosets `gK`, `d(g) = e`, of a subgroup
/// `K` of `G_e`. Transitive on its orbit and strict.
pub fn coset_action(t: &Arc<GroupoidTable>, e: usize, k: &ElementSet, name: &str) -> PartialActionTable {
    let star: Vec<usize> = t.star(e).collect();
    let coset = |g: usize| -> ElementSet { k.iter().map(|&x| t.comp(g, x).unwrap()).collect() };
    let mut cosets: Vec<ElementSet> = Vec::new();
    let mut class: BTreeMap<usize, usize> = BTreeMap::new();
    for &g in &star {
        let c = coset(g);
        let i = match cosets.iter().position(|d| *d == c) {
            Some(i) => i,
            None => {
                cosets.push(c);
                cosets.len() - 1
            }
        };
        class.insert(g, i);
    }
    let points: Vec<String> = cosets
        .iter()
        .map(|c| format!("{}K", t.name_of(*c.iter().next().unwrap())))
        .collect();
    let mut triples = Vec::new();
    for (&g, &c) in &class {
        for h in t.elements() {
            if let Some(hg) = t.comp(h, g) {
                triples.push((h, c, class[&hg]));
            }
        }
    }
    triples.sort();
    triples.dedup();
    PartialActionTable::new(name, t.clone(), points, triples).unwrap()
}

/// A random strict global action: a disjoint union of coset actions.
pub fn random_global_action<R: Rng>(rng: &mut R, t: &Arc<GroupoidTable>, max_points: usize) -> Option<PartialActionTable> {
    let mut parts: Vec<PartialActionTable> = Vec::new();
    let mut total = 0;
    for _ in 0..6 {
        let e = *t.objects().choose(rng).unwrap();
        let iso = t.isotropy_group(e).unwrap();
        let mut seed: ElementSet = [e].into_iter().collect();
        if rng.gen_bool(0.5) {
            seed.insert(**iso.iter().collect::<Vec<_>>().choose(rng).unwrap());
        }
        let k = generated_subgroupoid(t, &seed);
        let a = coset_action(t, e, &k, "c");
        if total + a.carrier_len() > max_points {
            continue;
        }
        total += a.carrier_len();
        parts.push(a);
        if rng.gen_bool(0.4) {
            break;
        }
    }
    if parts.is_empty() {
        return None;
    }
    Some(action_union(&parts, "glob").unwrap())
}

/// All arrows fix one point: global but not strict once there are two
/// objects.
pub fn fixing_action(t: &Arc<GroupoidTable>) -> PartialActionTable {
    let triples: Vec<_> = t.elements().map(|g| (g, 0, 0)).collect();
    PartialActionTable::new("fix", t.clone(), vec!["p".into()], triples).unwrap()
}

/// A random subset of points (nonempty), as indices.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.6)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// A random partial action on at most `max_points` points, as the
/// restriction of a global one, with its global ambient action and the
/// inclusion.
pub fn random_partial_action<R: Rng>(
    rng: &mut R,
    t: &Arc<GroupoidTable>,
    max_points: usize,
    strict: bool,
) -> Option<(PartialActionTable, PartialActionTable, Vec<usize>)> {
    let mut global = random_global_action(rng, t, max_points)?;
    if !strict && t.objects().len() > 1 && global.carrier_len() < max_points && rng.gen_bool(0.3) {
        global = action_union(&[global, fixing_action(t)], "mixed").unwrap();
    }
    let keep = random_subset(rng, global.carrier_len());
    let (part, incl) = restrict_to_subset(&global, &keep, "part").unwrap();
    Some((part, global, incl))
}

/// Groupoids with at most `max_len` elements that have at least one
/// object, with the `Arc` the action types want.
pub fn random_arc_groupoid<R: Rng>(rng: &mut R, max_len: usize) -> Arc<GroupoidTable> {
    Arc::new(random_groupoid(rng, max_len))
}

/// A random subgroupoid: generated by up to three random elements.
pub fn random_subgroupoid<R: Rng>(rng: &mut R, t: &GroupoidTable) -> ElementSet {
    let k = rng.gen_range(1..=3);
    let seed: ElementSet = (0..k).map(|_| rng.gen_range(0..t.len())).collect();
    generated_subgroupoid(t, &seed)
}

/// A random wide subgroupoid: objects plus up to two random elements.
pub fn random_wide_subgroupoid<R: Rng>(rng: &mut R, t: &GroupoidTable) -> ElementSet {
    let mut seed = t.object_set();
    for _ in 0..rng.gen_range(0..=2) {
        seed.insert(rng.gen_range(0..t.len()));
    }
    generated_subgroupoid(t, &seed)
}

/// A random star-injective functor into a groupoid with at most `max_len`
/// elements: a subgroupoid inclusion, the projection of a partial action
/// or an isomorphism, precomposed with a relabeling of the source.
pub fn random_star_injective<R: Rng>(rng: &mut R, max_len: usize) -> GroupoidFunctor {
    loop {
        let t = random_arc_groupoid(rng, max_len);
        let f = match rng.gen_range(0..3) {
            0 => {
                let s = random_subgroupoid(rng, &t);
                let sub = Arc::new(t.restrict(&s, "S").unwrap());
                GroupoidFunctor::inclusion(sub, t.clone()).unwrap()
            }
            1 => {
                let Some((p, _, _)) = random_partial_action(rng, &t, 6, false) else { continue };
                groupoid_core::equivalence::projection_functor(&p).unwrap()
            }
            _ => GroupoidFunctor::identity(t.clone()),
        };
        let (_, relabel) = scramble(f.source(), rng);
        let back = relabel.inverse().unwrap();
        return f.compose(&back).unwrap();
    }
}

/// Morphisms of partial actions `(f, p, q)` around a random strict partial
/// action: the identity, the inclusion into its global ambient action and
/// the inclusion into a strict enlargement.
pub fn action_morphisms<R: Rng>(
    rng: &mut R,
    max_len: usize,
    max_points: usize,
) -> Vec<(Vec<usize>, PartialActionTable, PartialActionTable)> {
    loop {
        let t = random_arc_groupoid(rng, max_len);
        let Some((p, amb, incl)) = random_partial_action(rng, &t, max_points, true) else { continue };
        if !p.is_strict() || !amb.is_strict() {
            continue;
        }
        let id: Vec<usize> = (0..p.carrier_len()).collect();
        let mut out = vec![(id, p.clone(), p.clone()), (incl.clone(), p.clone(), amb.clone())];
        if let Some(extra) = random_global_action(rng, &t, 3) {
            let big = action_union(&[amb.clone(), extra], "big").unwrap();
            let shifted: Vec<usize> = incl.clone();
            out.push((shifted, p.clone(), big));
        }
        return out;
    }
}

/// `ω` fixes every object of its target.
pub fn fixes_objects(a: &AutAction) -> bool {
    let t = a.target();
    a.permutations().iter().all(|p| t.objects().iter().all(|&e| p[e] == e))
}

/// A group `P = N ⋊ Γ` built from a random action of a small group on a
/// small group, with `H = N × 1` and the complement `1 × Γ`.
pub fn random_internal_semidirect<R: Rng>(rng: &mut R) -> (GroupoidTable, ElementSet, ElementSet) {
    loop {
        let groups = small_groups();
        let n = groups.choose(rng).unwrap().clone();
        let g = groups.choose(rng).unwrap().clone();
        if n.len() * g.len() > 24 {
            continue;
        }
        let auts = automorphisms(&n);
        let homs = homomorphisms(&g, &auts, 32);
        let Some(omega) = homs.choose(rng).cloned() else { continue };
        let act = AutAction::new(Arc::new(g), Arc::new(n), omega).unwrap();
        let semi = groupoid_core::product::semidirect_product(&act).unwrap();
        let (nt, gt) = (act.target(), act.group());
        let unit_n = nt.objects()[0];
        let unit_g = act.unit();
        let p = semi.table().clone();
        let h: ElementSet = p.elements().filter(|&i| semi.pair(i).1 == unit_g).collect();
        let sub: ElementSet = p.elements().filter(|&i| semi.pair(i).0 == unit_n).collect();
        assert_eq!(h.len(), nt.len());
        assert_eq!(sub.len(), gt.len());
        return (p, h, sub);
    }
}
