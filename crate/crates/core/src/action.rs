//! Partial groupoid actions on finite sets, the action groupoid and the
//! graph groupoid.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::functor::GroupoidFunctor;
use crate::groupoid::{GroupoidTable, RawTable, TableError};
use crate::naming;
use crate::report::ValidationReport;

/// A map between carriers, by point index.
pub type PointMap = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {0} is out of range")]
    PointOutOfRange(usize),
    #[error("element index {0} is out of range")]
    ElementOutOfRange(usize),
    #[error("`{g}·{x}` is declared twice")]
    DuplicatePair { g: String, x: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("not a partial action: {0}")]
    Invalid(String),
    #[error("empty family of actions")]
    EmptyFamily,
    #[error("actions are over different groupoids")]
    GroupoidMismatch,
    #[error("point map has {got} entries, carrier has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("point `{0}` lies in more than one identity domain")]
    NotStrict(String),
    #[error("action is not global at `{g}·{x}`")]
    NotGlobal { g: String, x: String },
}

/// A partial action `D ⊆ G × X → X`, with `D` stored extensionally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialActionTable {
    name: String,
    groupoid: Arc<GroupoidTable>,
    points: Vec<String>,
    point_index: BTreeMap<String, usize>,
    act: BTreeMap<(usize, usize), usize>,
}

impl PartialActionTable {
    /// Builds the table from index triples `(g, x, g·x)`. Only structure is
    /// checked here; see [`PartialActionTable::validate`].
    pub fn new<I>(
        name: impl Into<String>,
        groupoid: Arc<GroupoidTable>,
        points: Vec<String>,
        triples: I,
    ) -> Result<Self, ActionError>
    where
        I: IntoIterator<Item = (usize, usize, usize)>,
    {
        let mut point_index = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            if point_index.insert(p.clone(), i).is_some() {
                return Err(ActionError::DuplicatePoint(p.clone()));
            }
        }
        let mut act = BTreeMap::new();
        for (g, x, y) in triples {
            if g >= groupoid.len() {
                return Err(ActionError::ElementOutOfRange(g));
            }
            if let Some(&bad) = [x, y].iter().find(|&&p| p >= points.len()) {
                return Err(ActionError::PointOutOfRange(bad));
            }
            if act.insert((g, x), y).is_some() {
                return Err(ActionError::DuplicatePair {
                    g: groupoid.name_of(g).to_string(),
                    x: points[x].clone(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            groupoid,
            points,
            point_index,
            act,
        })
    }

    /// Builds the table from named triples `(g, x, g·x)`.
    pub fn from_names<S: AsRef<str>>(
        name: impl Into<String>,
        groupoid: Arc<GroupoidTable>,
        points: &[S],
        triples: &[(S, S, S)],
    ) -> Result<Self, ActionError> {
        let points: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        let pt = |p: &S| {
            points
                .iter()
                .position(|q| q == p.as_ref())
                .ok_or_else(|| ActionError::UnknownPoint(p.as_ref().to_string()))
        };
        let mut idx = Vec::with_capacity(triples.len());
        for (g, x, y) in triples {
            idx.push((groupoid.lookup(g.as_ref())?, pt(x)?, pt(y)?));
        }
        Self::new(name, groupoid, points, idx)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn groupoid(&self) -> &Arc<GroupoidTable> {
        &self.groupoid
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn carrier_len(&self) -> usize {
        self.points.len()
    }

    pub fn point_name(&self, x: usize) -> &str {
        &self.points[x]
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.point_index.get(name).copied()
    }

    /// `g·x`, if defined.
    pub fn get(&self, g: usize, x: usize) -> Option<usize> {
        self.act.get(&(g, x)).copied()
    }

    pub fn defined(&self, g: usize, x: usize) -> bool {
        self.act.contains_key(&(g, x))
    }

    /// The domain `D` with values, ordered by `(g, x)`.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.act.iter().map(|(&k, &v)| (k, v))
    }

    /// `|D|`.
    pub fn domain_len(&self) -> usize {
        self.act.len()
    }

    /// Objects `e` with `∃e·x`.
    pub fn identities_of(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.groupoid
            .objects()
            .iter()
            .copied()
            .filter(move |&e| self.defined(e, x))
    }

    pub fn validate(&self) -> ValidationReport {
        validate_partial_action(self)
    }

    fn require_valid(&self) -> Result<(), ActionError> {
        let rep = self.validate();
        if rep.passed() {
            Ok(())
        } else {
            Err(ActionError::Invalid(format!("{rep}")))
        }
    }

    /// `X_g = {x : ∃g⁻¹·x}`.
    pub fn domain_set(&self, g: usize) -> Vec<usize> {
        let gi = self.groupoid.inv(g);
        (0..self.points.len()).filter(|&x| self.defined(gi, x)).collect()
    }

    /// A point lying in two identity domains, if any.
    pub fn strictness_witness(&self) -> Option<usize> {
        (0..self.points.len()).find(|&x| self.identities_of(x).nth(1).is_some())
    }

    /// The identity domains `X_e` are pairwise disjoint.
    pub fn is_strict(&self) -> bool {
        self.strictness_witness().is_none()
    }

    /// First `(g, x)` with `∃d(g)·x` but not `∃g·x`.
    pub fn globality_witness(&self) -> Option<(usize, usize)> {
        let t = &*self.groupoid;
        t.elements().find_map(|g| {
            (0..self.points.len())
                .find(|&x| self.defined(t.d(g), x) && !self.defined(g, x))
                .map(|x| (g, x))
        })
    }

    pub fn is_global(&self) -> bool {
        self.globality_witness().is_none()
    }

    /// The unique `e_x` for every point of a strict action.
    pub fn identity_index(&self) -> Result<Vec<usize>, ActionError> {
        if let Some(x) = self.strictness_witness() {
            return Err(ActionError::NotStrict(self.points[x].clone()));
        }
        (0..self.points.len())
            .map(|x| {
                self.identities_of(x)
                    .next()
                    .ok_or_else(|| ActionError::Invalid(format!("point `{}` has no identity", self.points[x])))
            })
            .collect()
    }
}

/// Checks PGrA1–PGrA3 and the endpoint lemma
/// `∃g·x ⇒ ∃r(g)·(g·x)`, plus its converse direction
/// `∃r(g)·y ∧ ∃g⁻¹·y ⇒ ∃g·(g⁻¹·y)`.
pub fn validate_partial_action(p: &PartialActionTable) -> ValidationReport {
    let t = &*p.groupoid;
    let mut rep = ValidationReport::new();
    let gx = |g: usize, x: usize| vec![t.name_of(g).to_string(), p.points[x].clone()];

    for x in 0..p.points.len() {
        if p.identities_of(x).next().is_none() {
            rep.push("PGrA1", vec![p.points[x].clone()], format!("no identity acts on {}", p.points[x]));
        }
    }
    for &e in t.objects() {
        for x in 0..p.points.len() {
            if let Some(y) = p.get(e, x) {
                if y != x {
                    rep.push("PGrA1", gx(e, x), format!("identity {} moves {}", t.name_of(e), p.points[x]));
                }
            }
        }
    }
    for ((g, x), y) in p.pairs() {
        match p.get(t.inv(g), y) {
            Some(back) if back == x => {}
            Some(_) => rep.push("PGrA2", gx(g, x), format!("{0}⁻¹·({0}·{1}) differs from {1}", t.name_of(g), p.points[x])),
            None => rep.push("PGrA2", gx(g, x), format!("{0}⁻¹·({0}·{1}) is undefined", t.name_of(g), p.points[x])),
        }
    }
    for ((h, x), hx) in p.pairs() {
        for g in t.elements() {
            let Some(gh) = t.comp(g, h) else { continue };
            let Some(ghx) = p.get(g, hx) else { continue };
            match p.get(gh, x) {
                Some(v) if v == ghx => {}
                _ => {
                    let mut w = gx(g, x);
                    w.insert(1, t.name_of(h).to_string());
                    rep.push(
                        "PGrA3",
                        w,
                        format!("{0}·({1}·{2}) is defined but ({0}{1})·{2} is not equal to it", t.name_of(g), t.name_of(h), p.points[x]),
                    );
                }
            }
        }
    }
    for ((g, x), y) in p.pairs() {
        if !p.defined(t.r(g), y) {
            rep.push("Lemma", gx(g, x), format!("r({})·({}·{}) is undefined", t.name_of(g), t.name_of(g), p.points[x]));
        }
    }
    for g in t.elements() {
        let gi = t.inv(g);
        for y in 0..p.points.len() {
            if !p.defined(t.r(g), y) {
                continue;
            }
            if let Some(x) = p.get(gi, y) {
                if !p.defined(g, x) {
                    rep.push("Lemma", gx(g, x), format!("{}·{} is undefined although its endpoint is", t.name_of(g), p.points[x]));
                }
            }
        }
    }
    rep
}

/// An action groupoid `(G, X)` with its pair coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionGroupoid {
    table: GroupoidTable,
    pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl ActionGroupoid {
    pub fn table(&self) -> &GroupoidTable {
        &self.table
    }

    pub fn into_table(self) -> GroupoidTable {
        self.table
    }

    /// `(g, x)` of element `i`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of_pair(&self, g: usize, x: usize) -> Option<usize> {
        self.index.get(&(g, x)).copied()
    }
}

/// `(G, X)`: elements are `D`; `(g,x)(h,y) = (gh, y)` iff `d(g) = r(h)` and
/// `x = h·y`; `d(g,x) = (d(g), x)`, `r(g,x) = (r(g), g·x)`.
pub fn action_groupoid(p: &PartialActionTable) -> Result<ActionGroupoid, ActionError> {
    p.require_valid()?;
    let t = &*p.groupoid;
    let pairs: Vec<(usize, usize)> = p.act.keys().copied().collect();
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let at = |g: usize, x: usize| index[&(g, x)];
    let mut raw = RawTable {
        name: format!("({},{})", t.name(), p.name),
        elements: Vec::with_capacity(pairs.len()),
        objects: Vec::new(),
        dom: Vec::with_capacity(pairs.len()),
        rng: Vec::with_capacity(pairs.len()),
        inv: Vec::with_capacity(pairs.len()),
        comp: Vec::new(),
    };
    // Elements grouped by the point they land on, for composition.
    let mut landing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(g, x)) in pairs.iter().enumerate() {
        let gx = p.act[&(g, x)];
        raw.elements.push(naming::tuple([t.name_of(g), p.points[x].as_str()]));
        if t.is_object(g) {
            raw.objects.push(i);
        }
        raw.dom.push(at(t.d(g), x));
        raw.rng.push(at(t.r(g), gx));
        raw.inv.push(at(t.inv(g), gx));
        landing.entry(gx).or_default().push(i);
    }
    for (i, &(g, x)) in pairs.iter().enumerate() {
        // the inner (h, y) must land on x
        for &j in landing.get(&x).into_iter().flatten() {
            let (h, y) = pairs[j];
            if t.d(g) != t.r(h) {
                continue;
            }
            let gh = t.comp(g, h).expect("composable in G");
            raw.comp.push((i, j, at(gh, y)));
        }
    }
    Ok(ActionGroupoid {
        table: GroupoidTable::from_raw(raw)?,
        pairs,
        index,
    })
}

/// `Gr(α)`: triples `(g, x, g·x)` in the order of `D`, with
/// `(g,x,y)(h,v,x) = (gh, v, y)`, `d(g,x,y) = (d(g), x, x)`,
/// `r(g,x,y) = (r(g), y, y)` and `(g,x,y)⁻¹ = (g⁻¹, y, x)`.
pub fn graph_groupoid(p: &PartialActionTable) -> Result<GroupoidTable, ActionError> {
    p.require_valid()?;
    let t = &*p.groupoid;
    let triples: Vec<(usize, usize, usize)> = p.pairs().map(|((g, x), y)| (g, x, y)).collect();
    let index: BTreeMap<(usize, usize, usize), usize> =
        triples.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let at = |k: (usize, usize, usize)| index[&k];
    let mut raw = RawTable {
        name: format!("Gr({})", p.name),
        elements: Vec::with_capacity(triples.len()),
        objects: Vec::new(),
        dom: Vec::with_capacity(triples.len()),
        rng: Vec::with_capacity(triples.len()),
        inv: Vec::with_capacity(triples.len()),
        comp: Vec::new(),
    };
    for (i, &(g, x, y)) in triples.iter().enumerate() {
        raw.elements.push(naming::tuple([t.name_of(g), p.points[x].as_str(), p.points[y].as_str()]));
        if t.is_object(g) {
            raw.objects.push(i);
        }
        raw.dom.push(at((t.d(g), x, x)));
        raw.rng.push(at((t.r(g), y, y)));
        raw.inv.push(at((t.inv(g), y, x)));
    }
    for (i, &(g, x, y)) in triples.iter().enumerate() {
        for (j, &(h, v, w)) in triples.iter().enumerate() {
            if w != x || t.d(g) != t.r(h) {
                continue;
            }
            let gh = t.comp(g, h).expect("composable in G");
            raw.comp.push((i, j, at((gh, v, y))));
        }
    }
    Ok(GroupoidTable::from_raw(raw)?)
}

/// `(g, x) ↦ (g, x, g·x)`, verified to be an isomorphism.
pub fn graph_iso(p: &PartialActionTable) -> Result<GroupoidFunctor, ActionError> {
    let src = Arc::new(action_groupoid(p)?.into_table());
    let tgt = Arc::new(graph_groupoid(p)?);
    // Both tables list D in the same order.
    let f = GroupoidFunctor::new(src, tgt, (0..p.domain_len()).collect())
        .map_err(|e| ActionError::Invalid(e.to_string()))?;
    if !f.is_isomorphism() {
        return Err(ActionError::Invalid(format!("graph map is not an isomorphism: {}", f.verify())));
    }
    Ok(f)
}

/// First `(g, x) ∈ D_p` where `f` fails to be equivariant.
pub fn morphism_witness(
    f: &[usize],
    p: &PartialActionTable,
    q: &PartialActionTable,
) -> Result<Option<(usize, usize)>, ActionError> {
    if p.groupoid != q.groupoid {
        return Err(ActionError::GroupoidMismatch);
    }
    if f.len() != p.points.len() {
        return Err(ActionError::WrongLength {
            expected: p.points.len(),
            got: f.len(),
        });
    }
    if let Some(&bad) = f.iter().find(|&&y| y >= q.points.len()) {
        return Err(ActionError::PointOutOfRange(bad));
    }
    Ok(p
        .pairs()
        .find(|&((g, x), gx)| q.get(g, f[x]) != Some(f[gx]))
        .map(|(k, _)| k))
}

/// `∃g·f(x)` and `f(g·x) = g·f(x)` whenever `∃g·x`.
pub fn is_action_morphism(
    f: &[usize],
    p: &PartialActionTable,
    q: &PartialActionTable,
) -> Result<bool, ActionError> {
    Ok(morphism_witness(f, p, q)?.is_none())
}

/// Disjoint union over a common groupoid; point `x` of the `i`-th action
/// becomes `i.x`.
pub fn disjoint_union(
    actions: &[PartialActionTable],
    name: impl Into<String>,
) -> Result<PartialActionTable, ActionError> {
    let first = actions.first().ok_or(ActionError::EmptyFamily)?;
    let mut points = Vec::new();
    let mut triples = Vec::new();
    for (i, a) in actions.iter().enumerate() {
        if a.groupoid != first.groupoid {
            return Err(ActionError::GroupoidMismatch);
        }
        let off = points.len();
        points.extend(a.points.iter().map(|x| format!("{i}.{x}")));
        triples.extend(a.pairs().map(|((g, x), y)| (g, x + off, y + off)));
    }
    PartialActionTable::new(name, first.groupoid.clone(), points, triples)
}

/// `G` acting on its own elements by left composition: `g·x = gx` whenever
/// `d(g) = r(x)`. Global and strict.
pub fn regular_action(t: Arc<GroupoidTable>) -> PartialActionTable {
    let points = t.element_names().to_vec();
    let triples: Vec<(usize, usize, usize)> = t.defined_products().collect();
    PartialActionTable::new(alloc::format!("reg({})", t.name()), t, points, triples)
        .expect("products are in range")
}

/// Restriction to the points in `keep` (by index, order preserved):
/// `g·x` stays defined iff both `x` and `g·x` are kept. Returns the
/// restricted action and its inclusion map.
pub fn restrict_to_subset(
    p: &PartialActionTable,
    keep: &[usize],
    name: impl Into<String>,
) -> Result<(PartialActionTable, PointMap), ActionError> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if let Some(&bad) = keep.iter().find(|&&x| x >= p.points.len()) {
        return Err(ActionError::PointOutOfRange(bad));
    }
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let points = keep.iter().map(|&x| p.points[x].clone()).collect();
    let triples: Vec<(usize, usize, usize)> = p
        .pairs()
        .filter_map(|((g, x), y)| Some((g, *pos.get(&x)?, *pos.get(&y)?)))
        .collect();
    let r = PartialActionTable::new(name, p.groupoid.clone(), points, triples)?;
    Ok((r, keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::connected::pair_groupoid;

    fn pair_on_pq() -> PartialActionTable {
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
    fn global_pair_action() {
        let p = pair_on_pq();
        assert!(p.validate().passed(), "{}", p.validate());
        assert!(p.is_global());
        assert!(p.is_strict());
        let ag = action_groupoid(&p).unwrap();
        assert_eq!(ag.table().len(), 4);
        assert!(ag.table().validate().passed());
        assert!(ag.table().is_connected());
        assert!(graph_iso(&p).unwrap().is_isomorphism());
    }

    #[test]
    fn broken_inverse_pair_is_pgra2() {
        let g = Arc::new(pair_groupoid(&["x", "y"]).unwrap());
        let p = PartialActionTable::from_names(
            "broken",
            g,
            &["p", "q"],
            &[("(x|x)", "p", "p"), ("(y|y)", "q", "q"), ("(y|x)", "q", "p")],
        )
        .unwrap();
        let rep = p.validate();
        assert!(rep.has("PGrA2"), "{rep}");
        assert!(!p.is_global());
        assert!(action_groupoid(&p).is_err());
    }

    #[test]
    fn identity_only_action_is_discrete() {
        let e8 = Arc::new(catalog::e8());
        let p = PartialActionTable::from_names("id", e8, &["p", "q"], &[("x", "p", "p"), ("y", "q", "q")]).unwrap();
        assert!(p.validate().passed());
        assert!(p.is_strict());
        assert!(!p.is_global());
        let ag = action_groupoid(&p).unwrap();
        assert_eq!(ag.table().objects().len(), 2);
        assert_eq!(ag.table().len(), 2);
        let gr = graph_groupoid(&p).unwrap();
        assert_eq!(gr.element_names(), ["(x|p|p)", "(y|q|q)"]);
    }

    #[test]
    fn regular_action_is_global_and_strict() {
        let p = regular_action(Arc::new(catalog::e8()));
        assert!(p.validate().passed());
        assert!(p.is_global() && p.is_strict());
        let a = p.groupoid().lookup("a").unwrap();
        let x = p.point_index("x").unwrap();
        assert_eq!(p.domain_set(a).len(), 4);
        assert!(p.domain_set(a).contains(&x));
        assert!(graph_iso(&p).unwrap().is_isomorphism());
    }

    #[test]
    fn restrictions_are_partial_actions() {
        let p = regular_action(Arc::new(catalog::e8()));
        let keep: Vec<usize> = ["x", "u", "a"].iter().map(|n| p.point_index(n).unwrap()).collect();
        let (r, incl) = restrict_to_subset(&p, &keep, "sub").unwrap();
        assert!(r.validate().passed(), "{}", r.validate());
        assert!(!r.is_global());
        assert!(is_action_morphism(&incl, &r, &p).unwrap());
        let identity: Vec<usize> = (0..r.carrier_len()).collect();
        assert!(is_action_morphism(&identity, &r, &r).unwrap());
    }

    #[test]
    fn fixing_one_point_is_not_strict() {
        let e8 = Arc::new(catalog::e8());
        let triples: Vec<(usize, usize, usize)> = e8.elements().map(|g| (g, 0, 0)).collect();
        let p = PartialActionTable::new("fix", e8, vec!["p".into()], triples).unwrap();
        assert!(p.validate().passed());
        assert!(p.is_global());
        assert_eq!(p.strictness_witness(), Some(0));
        assert!(matches!(p.identity_index(), Err(ActionError::NotStrict(_))));
    }
}
