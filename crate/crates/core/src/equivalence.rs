//! Star-injective functors and strict partial actions: the projection and
//! induced-action constructions, the comparison maps `τ` and `η`, the two
//! constructions on morphisms, and set-valued functors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::action::{
    action_groupoid, is_action_morphism, ActionError, ActionGroupoid, PartialActionTable, PointMap,
};
use crate::functor::{FunctorError, GroupoidFunctor};
use crate::groupoid::GroupoidTable;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivalenceError {
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("functor is not star injective: `{0}` and `{1}` share a domain and an image")]
    NotStarInjective(String, String),
    #[error("action is not strict at point `{0}`")]
    NotStrict(String),
    #[error("action is not global at `{0}·{1}`")]
    NotGlobal(String, String),
    #[error("not a morphism: {0}")]
    NotAMorphism(String),
    #[error("set functor is not strongly injective: `{0}` lies in two fibers")]
    NotStronglyInjective(String),
    #[error("set functor has the wrong shape: {0}")]
    Shape(String),
    #[error("internal check failed: {0}")]
    Invariant(String),
}

/// Star conditions of a functor. A covering is both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctorClass {
    pub star_injective: bool,
    pub star_surjective: bool,
    pub covering: bool,
}

fn star_injectivity_witness(f: &GroupoidFunctor) -> Option<(usize, usize)> {
    let s = &**f.source();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for g in s.elements() {
        if let Some(&h) = seen.get(&(s.d(g), f.apply(g))) {
            return Some((h, g));
        }
        seen.insert((s.d(g), f.apply(g)), g);
    }
    None
}

pub fn classify_functor(f: &GroupoidFunctor) -> Result<FunctorClass, EquivalenceError> {
    f.require_functorial()?;
    let (s, t) = (&**f.source(), &**f.target());
    let star_injective = star_injectivity_witness(f).is_none();
    let star_surjective = s.objects().iter().all(|&e| {
        let hit: BTreeSet<usize> = s.star(e).map(|g| f.apply(g)).collect();
        t.star(f.apply(e)).all(|g| hit.contains(&g))
    });
    Ok(FunctorClass {
        star_injective,
        star_surjective,
        covering: star_injective && star_surjective,
    })
}

fn require_star_injective(f: &GroupoidFunctor) -> Result<(), EquivalenceError> {
    f.require_functorial()?;
    match star_injectivity_witness(f) {
        None => Ok(()),
        Some((a, b)) => Err(EquivalenceError::NotStarInjective(
            f.source().name_of(a).to_string(),
            f.source().name_of(b).to_string(),
        )),
    }
}

/// `Γ^α : (G, X) → G`, `(g, x) ↦ g`, with the action groupoid it starts
/// from.
pub fn projection(p: &PartialActionTable) -> Result<(ActionGroupoid, GroupoidFunctor), EquivalenceError> {
    let ag = action_groupoid(p)?;
    let map = (0..ag.table().len()).map(|i| ag.pair(i).0).collect();
    let f = GroupoidFunctor::new(Arc::new(ag.table().clone()), p.groupoid().clone(), map)?;
    Ok((ag, f))
}

pub fn projection_functor(p: &PartialActionTable) -> Result<GroupoidFunctor, EquivalenceError> {
    Ok(projection(p)?.1)
}

/// `α^Γ`: `G` acts on the objects of the source, `g·x = r(h)` for the
/// unique `h` with `d(h) = x` and `Γ(h) = g`. Points are named after the
/// source objects, in the source's object order.
pub fn induced_partial_action(f: &GroupoidFunctor) -> Result<PartialActionTable, EquivalenceError> {
    require_star_injective(f)?;
    let s = &**f.source();
    let slot: BTreeMap<usize, usize> = s.objects().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let points: Vec<String> = s.objects().iter().map(|&e| s.name_of(e).to_string()).collect();
    let triples = s.elements().map(|h| (f.apply(h), slot[&s.d(h)], slot[&s.r(h)]));
    let name = format!("ind({})", s.name());
    Ok(PartialActionTable::new(name, f.target().clone(), points, triples)?)
}

/// Bijective, equivariant, with an equivariant inverse.
pub fn is_action_isomorphism(
    f: &[usize],
    p: &PartialActionTable,
    q: &PartialActionTable,
) -> Result<bool, EquivalenceError> {
    if f.len() != q.carrier_len() {
        return Ok(false);
    }
    let mut inv = alloc::vec![usize::MAX; q.carrier_len()];
    for (x, &y) in f.iter().enumerate() {
        if y >= inv.len() || inv[y] != usize::MAX {
            return Ok(false);
        }
        inv[y] = x;
    }
    Ok(is_action_morphism(f, p, q)? && is_action_morphism(&inv, q, p)?)
}

/// `τ_α : x ↦ (e_x, x)`, from the carrier of a strict `p` onto the carrier
/// of `α^{Γ^α}`. Verified to be an isomorphism of partial actions.
pub fn tau(p: &PartialActionTable) -> Result<PointMap, EquivalenceError> {
    let ex = p
        .identity_index()
        .map_err(|e| match e {
            ActionError::NotStrict(x) => EquivalenceError::NotStrict(x),
            other => EquivalenceError::Action(other),
        })?;
    let (ag, gamma) = projection(p)?;
    let induced = induced_partial_action(&gamma)?;
    let map: PointMap = (0..p.carrier_len())
        .map(|x| {
            let obj = ag.index_of_pair(ex[x], x).expect("(e_x, x) is in D");
            induced
                .point_index(ag.table().name_of(obj))
                .expect("objects are points of the induced action")
        })
        .collect();
    if !is_action_isomorphism(&map, p, &induced)? {
        return Err(EquivalenceError::Invariant("tau is not an isomorphism of partial actions".to_string()));
    }
    Ok(map)
}

/// `η_Γ : h ↦ (Γ(h), d(h))`, from the source of `Γ` onto the action
/// groupoid of `α^Γ`. Verified bijective, functorial and with
/// `Γ^{α^Γ} ∘ η_Γ = Γ`.
pub fn eta(f: &GroupoidFunctor) -> Result<GroupoidFunctor, EquivalenceError> {
    let induced = induced_partial_action(f)?;
    let (ag, gamma) = projection(&induced)?;
    let s = &**f.source();
    let slot: BTreeMap<usize, usize> = s.objects().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let map = s
        .elements()
        .map(|h| ag.index_of_pair(f.apply(h), slot[&s.d(h)]).expect("h witnesses its own pair"))
        .collect();
    let eta = GroupoidFunctor::new(f.source().clone(), gamma.source().clone(), map)?;
    if !eta.is_isomorphism() {
        return Err(EquivalenceError::Invariant(format!("eta is not an isomorphism: {}", eta.verify())));
    }
    if gamma.compose(&eta)?.map() != f.map() {
        return Err(EquivalenceError::Invariant("projection after eta differs from the functor".to_string()));
    }
    Ok(eta)
}

/// The functor on morphisms of partial actions:
/// `F(f): (G, X) → (G, X')`, `(g, x) ↦ (g, f(x))`.
pub fn lift_morphism(
    f: &[usize],
    p: &PartialActionTable,
    q: &PartialActionTable,
) -> Result<GroupoidFunctor, EquivalenceError> {
    if !is_action_morphism(f, p, q)? {
        return Err(EquivalenceError::NotAMorphism("point map is not equivariant".to_string()));
    }
    let (ap, gp) = projection(p)?;
    let (aq, gq) = projection(q)?;
    let map = (0..ap.table().len())
        .map(|i| {
            let (g, x) = ap.pair(i);
            aq.index_of_pair(g, f[x]).expect("equivariance keeps the pair defined")
        })
        .collect();
    let lifted = GroupoidFunctor::new(gp.source().clone(), gq.source().clone(), map)?;
    lifted.require_functorial()?;
    if gq.compose(&lifted)?.map() != gp.map() {
        return Err(EquivalenceError::Invariant("lifted map does not commute with the projections".to_string()));
    }
    Ok(lifted)
}

/// The functor on morphisms of star injections: `G(f)` sends the object
/// `e` of the first source to `f(e)`, as a map between the carriers of the
/// induced actions. Requires `Γ₂ ∘ f = Γ₁`.
pub fn objects_map(
    f: &GroupoidFunctor,
    gamma1: &GroupoidFunctor,
    gamma2: &GroupoidFunctor,
) -> Result<PointMap, EquivalenceError> {
    f.require_functorial()?;
    if gamma2.compose(f).map_err(|_| EquivalenceError::NotAMorphism("sources do not match".to_string()))?.map()
        != gamma1.map()
        || **f.source() != **gamma1.source()
    {
        return Err(EquivalenceError::NotAMorphism("the triangle does not commute".to_string()));
    }
    let (s1, s2) = (&**gamma1.source(), &**gamma2.source());
    let slot2: BTreeMap<usize, usize> = s2.objects().iter().enumerate().map(|(i, &e)| (e, i)).collect();
    Ok(s1.objects().iter().map(|&e| slot2[&f.apply(e)]).collect())
}

/// `τ_q ∘ f = GF(f) ∘ τ_p` on every point.
pub fn tau_square_commutes(
    f: &[usize],
    p: &PartialActionTable,
    q: &PartialActionTable,
) -> Result<bool, EquivalenceError> {
    let (tp, tq) = (tau(p)?, tau(q)?);
    let lifted = lift_morphism(f, p, q)?;
    let (_, gp) = projection(p)?;
    let (_, gq) = projection(q)?;
    let gf = objects_map(&lifted, &gp, &gq)?;
    Ok((0..p.carrier_len()).all(|x| tq[f[x]] == gf[tp[x]]))
}

/// `η_{Γ₂} ∘ f = FG(f) ∘ η_{Γ₁}` on every element.
pub fn eta_square_commutes(
    f: &GroupoidFunctor,
    gamma1: &GroupoidFunctor,
    gamma2: &GroupoidFunctor,
) -> Result<bool, EquivalenceError> {
    let (e1, e2) = (eta(gamma1)?, eta(gamma2)?);
    let gmap = objects_map(f, gamma1, gamma2)?;
    let (a1, a2) = (induced_partial_action(gamma1)?, induced_partial_action(gamma2)?);
    let fg = lift_morphism(&gmap, &a1, &a2)?;
    Ok(gamma1
        .source()
        .elements()
        .all(|h| e2.apply(f.apply(h)) == fg.apply(e1.apply(h))))
}

/// A functor `G → Set` on finite sets: one fiber per object (in object
/// order) and, per element `g`, a bijection `F(d(g)) → F(r(g))` by fiber
/// position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctor {
    source: Arc<GroupoidTable>,
    fibers: Vec<Vec<String>>,
    maps: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(
        source: Arc<GroupoidTable>,
        fibers: Vec<Vec<String>>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self, EquivalenceError> {
        if fibers.len() != source.objects().len() || maps.len() != source.len() {
            return Err(EquivalenceError::Shape("one fiber per object and one map per element".to_string()));
        }
        let sf = Self { source, fibers, maps };
        for g in sf.source.elements() {
            let (dn, rn) = (sf.fiber(sf.source.d(g)).len(), sf.fiber(sf.source.r(g)).len());
            if sf.maps[g].len() != dn || sf.maps[g].iter().any(|&i| i >= rn) {
                return Err(EquivalenceError::Shape(format!("map of `{}` has the wrong size", sf.source.name_of(g))));
            }
        }
        Ok(sf)
    }

    pub fn source(&self) -> &Arc<GroupoidTable> {
        &self.source
    }

    fn slot(&self, e: usize) -> usize {
        self.source.objects().iter().position(|&o| o == e).expect("object")
    }

    /// `F(e)`.
    pub fn fiber(&self, e: usize) -> &[String] {
        &self.fibers[self.slot(e)]
    }

    /// `F(g)` by fiber position.
    pub fn morphism(&self, g: usize) -> &[usize] {
        &self.maps[g]
    }

    /// Functor laws: identities act trivially, maps are bijections and
    /// `F(gh) = F(g) ∘ F(h)`.
    pub fn validate(&self) -> ValidationReport {
        let t = &*self.source;
        let mut rep = ValidationReport::new();
        for &e in t.objects() {
            if self.maps[e].iter().enumerate().any(|(i, &j)| i != j) {
                rep.push("identity", alloc::vec![t.name_of(e).to_string()], "identity acts nontrivially".to_string());
            }
        }
        for g in t.elements() {
            let n = self.fiber(t.r(g)).len();
            let image: BTreeSet<usize> = self.maps[g].iter().copied().collect();
            if image.len() != self.maps[g].len() || n != self.maps[g].len() {
                rep.push("bijection", alloc::vec![t.name_of(g).to_string()], "map is not a bijection".to_string());
            }
        }
        for (g, h, gh) in t.defined_products() {
            let composed: Vec<usize> = self.maps[h].iter().map(|&i| self.maps[g][i]).collect();
            if composed != self.maps[gh] {
                rep.push(
                    "composition",
                    alloc::vec![t.name_of(g).to_string(), t.name_of(h).to_string()],
                    "F(gh) differs from F(g)F(h)".to_string(),
                );
            }
        }
        rep
    }

    /// A name shared by two fibers, if any.
    pub fn strong_injectivity_witness(&self) -> Option<&str> {
        let mut seen = BTreeSet::new();
        self.fibers
            .iter()
            .flatten()
            .find(|x| !seen.insert(x.as_str()))
            .map(|x| x.as_str())
    }

    pub fn is_strongly_injective(&self) -> bool {
        self.strong_injectivity_witness().is_none()
    }
}

/// `e ↦ X_e`, `g ↦ (x ↦ g·x)` for a strict global action.
pub fn action_to_setfunctor(p: &PartialActionTable) -> Result<SetFunctor, EquivalenceError> {
    if let Some(x) = p.strictness_witness() {
        return Err(EquivalenceError::NotStrict(p.point_name(x).to_string()));
    }
    if let Some((g, x)) = p.globality_witness() {
        return Err(EquivalenceError::NotGlobal(p.groupoid().name_of(g).to_string(), p.point_name(x).to_string()));
    }
    let rep = p.validate();
    if !rep.passed() {
        return Err(ActionError::Invalid(format!("{rep}")).into());
    }
    let t = p.groupoid().clone();
    let fiber_idx: Vec<Vec<usize>> = t.objects().iter().map(|&e| p.domain_set(e)).collect();
    let pos = |e: usize, x: usize| {
        let k = t.objects().iter().position(|&o| o == e).expect("object");
        fiber_idx[k].iter().position(|&y| y == x).expect("point in fiber")
    };
    let mut maps = Vec::with_capacity(t.len());
    for g in t.elements() {
        let src = &fiber_idx[t.objects().iter().position(|&o| o == t.d(g)).expect("object")];
        maps.push(
            src.iter()
                .map(|&x| pos(t.r(g), p.get(g, x).expect("global")))
                .collect(),
        );
    }
    let fibers = fiber_idx
        .iter()
        .map(|f| f.iter().map(|&x| p.point_name(x).to_string()).collect())
        .collect();
    SetFunctor::new(t, fibers, maps)
}

/// The inverse construction: the carrier is the union of the fibers, listed
/// fiber by fiber.
pub fn setfunctor_to_action(sf: &SetFunctor, name: impl Into<String>) -> Result<PartialActionTable, EquivalenceError> {
    if let Some(x) = sf.strong_injectivity_witness() {
        return Err(EquivalenceError::NotStronglyInjective(x.to_string()));
    }
    let t = &*sf.source;
    let points: Vec<String> = sf.fibers.iter().flatten().cloned().collect();
    let mut offset = Vec::with_capacity(sf.fibers.len());
    let mut acc = 0;
    for f in &sf.fibers {
        offset.push(acc);
        acc += f.len();
    }
    let mut triples = Vec::new();
    for g in t.elements() {
        let (od, or) = (offset[sf.slot(t.d(g))], offset[sf.slot(t.r(g))]);
        for (i, &j) in sf.maps[g].iter().enumerate() {
            triples.push((g, od + i, or + j));
        }
    }
    Ok(PartialActionTable::new(name, sf.source.clone(), points, triples)?)
}

/// Same groupoid, same point names and the same named triples, ignoring
/// carrier order.
pub fn same_action(p: &PartialActionTable, q: &PartialActionTable) -> bool {
    let named = |a: &PartialActionTable| -> BTreeSet<(String, String, String)> {
        a.pairs()
            .map(|((g, x), y)| {
                (
                    a.groupoid().name_of(g).to_string(),
                    a.point_name(x).to_string(),
                    a.point_name(y).to_string(),
                )
            })
            .collect()
    };
    let pts = |a: &PartialActionTable| a.points().iter().cloned().collect::<BTreeSet<_>>();
    p.groupoid() == q.groupoid() && pts(p) == pts(q) && named(p) == named(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{regular_action, restrict_to_subset};
    use crate::catalog;
    use crate::connected::pair_groupoid;

    fn swap() -> PartialActionTable {
        let g = Arc::new(pair_groupoid(&["x", "y"]).unwrap());
        PartialActionTable::from_names(
            "swap",
            g,
            &["p", "q"],
            &[
                ("(x|x)", "p", "p"),
                ("(y|y)", "q", "q"),
                ("(x|y)", "p", "q"),
                ("(y|x)", "q", "p"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_functor_is_a_covering() {
        let f = GroupoidFunctor::identity(Arc::new(catalog::e8()));
        let c = classify_functor(&f).unwrap();
        assert!(c.star_injective && c.star_surjective && c.covering);
        let induced = induced_partial_action(&f).unwrap();
        assert!(induced.validate().passed());
        assert!(induced.is_global() && induced.is_strict());
        let e = eta(&f).unwrap();
        assert!(e.is_isomorphism());
    }

    #[test]
    fn non_wide_inclusion_is_star_injective_only() {
        let e8 = Arc::new(catalog::e8());
        let iso = e8.isotropy_group(e8.lookup("x").unwrap()).unwrap();
        let sub = Arc::new(e8.restrict(&iso, "Ex").unwrap());
        let f = GroupoidFunctor::inclusion(sub, e8).unwrap();
        let c = classify_functor(&f).unwrap();
        assert!(c.star_injective);
        assert!(!c.star_surjective);
        assert!(eta(&f).unwrap().is_isomorphism());
    }

    #[test]
    fn projection_classifies_globality() {
        let g = swap();
        let c = classify_functor(&projection_functor(&g).unwrap()).unwrap();
        assert!(c.covering);
        let reg = regular_action(Arc::new(catalog::e8()));
        let keep: Vec<usize> = (0..5).collect();
        let (r, _) = restrict_to_subset(&reg, &keep, "part").unwrap();
        assert!(!r.is_global());
        let c = classify_functor(&projection_functor(&r).unwrap()).unwrap();
        assert_eq!(
            c,
            FunctorClass {
                star_injective: true,
                star_surjective: false,
                covering: false
            }
        );
    }

    #[test]
    fn tau_round_trip() {
        for p in [swap(), regular_action(Arc::new(catalog::e8()))] {
            let t = tau(&p).unwrap();
            let induced = induced_partial_action(&projection_functor(&p).unwrap()).unwrap();
            assert!(is_action_isomorphism(&t, &p, &induced).unwrap());
        }
    }

    #[test]
    fn naturality_for_an_inclusion() {
        let reg = regular_action(Arc::new(catalog::e8()));
        let keep: Vec<usize> = (0..5).collect();
        let (r, incl) = restrict_to_subset(&reg, &keep, "part").unwrap();
        assert!(tau_square_commutes(&incl, &r, &reg).unwrap());
        let gr = projection_functor(&r).unwrap();
        let greg = projection_functor(&reg).unwrap();
        let lifted = lift_morphism(&incl, &r, &reg).unwrap();
        assert!(eta_square_commutes(&lifted, &gr, &greg).unwrap());
    }

    #[test]
    fn set_functor_round_trip() {
        let p = swap();
        let sf = action_to_setfunctor(&p).unwrap();
        assert!(sf.validate().passed());
        assert!(sf.is_strongly_injective());
        let x = p.groupoid().lookup("(x|x)").unwrap();
        assert_eq!(sf.fiber(x), ["p"]);
        let back = setfunctor_to_action(&sf, "swap").unwrap();
        assert!(same_action(&p, &back));
        let r = regular_action(Arc::new(catalog::e8()));
        assert!(same_action(&r, &setfunctor_to_action(&action_to_setfunctor(&r).unwrap(), "r").unwrap()));
    }

    #[test]
    fn non_strict_is_rejected() {
        let e8 = Arc::new(catalog::e8());
        let triples: Vec<(usize, usize, usize)> = e8.elements().map(|g| (g, 0, 0)).collect();
        let p = PartialActionTable::new("fix", e8, alloc::vec!["p".into()], triples).unwrap();
        assert!(matches!(tau(&p), Err(EquivalenceError::NotStrict(_))));
        assert!(matches!(action_to_setfunctor(&p), Err(EquivalenceError::NotStrict(_))));
    }
}
