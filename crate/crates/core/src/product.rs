//! Direct products of finite families, semidirect products by a group
//! acting through automorphisms, and recognition of internal semidirect
//! products.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::functor::{FunctorError, GroupoidFunctor};
use crate::groupoid::{ElementSet, GroupoidTable, RawTable, TableError};
use crate::naming;
use crate::report::ValidationReport;
use crate::subgroupoid::{is_normal, is_subgroupoid, product_set};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProductError {
    #[error("direct product of an empty family")]
    EmptyFamily,
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error("permutation table has the wrong shape")]
    Shape,
    #[error("not a valid action by automorphisms: {0}")]
    InvalidAction(String),
    #[error("subgroupoid is not normal")]
    NotNormal,
    #[error("set is not a subgroup of a single isotropy group")]
    NotASubgroup,
    #[error("intersection with the subgroup contains `{0}` besides the identity")]
    IntersectionTooLarge(String),
    #[error("conjugation by `{g}` is undefined on `{k}`")]
    ConjugationUndefined { g: String, k: String },
    #[error("conjugation by `{g}` sends `{k}` outside the normal subgroupoid")]
    ConjugationEscapes { g: String, k: String },
    #[error("`{0}` has more than one factorization")]
    NonUniqueFactorization(String),
    #[error("internal check failed: {0}")]
    Invariant(String),
}

/// A direct product with its tuple coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectProduct {
    table: GroupoidTable,
    factors: Vec<Arc<GroupoidTable>>,
    tuples: Vec<Vec<usize>>,
    lookup: BTreeMap<Vec<usize>, usize>,
}

impl DirectProduct {
    pub fn table(&self) -> &GroupoidTable {
        &self.table
    }

    pub fn into_table(self) -> GroupoidTable {
        self.table
    }

    pub fn factors(&self) -> &[Arc<GroupoidTable>] {
        &self.factors
    }

    pub fn tuple(&self, g: usize) -> &[usize] {
        &self.tuples[g]
    }

    pub fn index_of_tuple(&self, tuple: &[usize]) -> Option<usize> {
        self.lookup.get(tuple).copied()
    }
}

/// Componentwise product: a pair of tuples composes iff every component
/// does. Elements are named `(a|b|…)` and listed in lexicographic order of
/// the factors' element orders.
pub fn direct_product(factors: &[GroupoidTable]) -> Result<DirectProduct, ProductError> {
    if factors.is_empty() {
        return Err(ProductError::EmptyFamily);
    }
    let name = factors
        .iter()
        .map(|f| f.name())
        .collect::<Vec<_>>()
        .join("*");
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::with_capacity(tuples.len() * f.len());
        for t in &tuples {
            for g in f.elements() {
                let mut t = t.clone();
                t.push(g);
                next.push(t);
            }
        }
        tuples = next;
    }
    let lookup: BTreeMap<Vec<usize>, usize> =
        tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let at = |t: Vec<usize>| lookup[&t];
    let map_tuple = |t: &[usize], f: &dyn Fn(&GroupoidTable, usize) -> usize| -> Vec<usize> {
        t.iter().zip(factors).map(|(&g, tab)| f(tab, g)).collect()
    };
    let mut raw = RawTable {
        name,
        elements: Vec::with_capacity(tuples.len()),
        objects: Vec::new(),
        dom: Vec::with_capacity(tuples.len()),
        rng: Vec::with_capacity(tuples.len()),
        inv: Vec::with_capacity(tuples.len()),
        comp: Vec::new(),
    };
    for (i, t) in tuples.iter().enumerate() {
        raw.elements.push(naming::tuple(
            t.iter().zip(factors).map(|(&g, f)| f.name_of(g)),
        ));
        if t.iter().zip(factors).all(|(&g, f)| f.is_object(g)) {
            raw.objects.push(i);
        }
        raw.dom.push(at(map_tuple(t, &|f, g| f.d(g))));
        raw.rng.push(at(map_tuple(t, &|f, g| f.r(g))));
        raw.inv.push(at(map_tuple(t, &|f, g| f.inv(g))));
    }
    // Group tuples by range so only composable pairs are visited.
    let mut by_range: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &r) in raw.rng.iter().enumerate() {
        by_range.entry(r).or_default().push(i);
    }
    for (i, t) in tuples.iter().enumerate() {
        let Some(partners) = by_range.get(&raw.dom[i]) else { continue };
        for &j in partners {
            let s = &tuples[j];
            let prod: Option<Vec<usize>> = t
                .iter()
                .zip(s)
                .zip(factors)
                .map(|((&g, &h), f)| if f.composable(g, h) { f.comp(g, h) } else { None })
                .collect();
            if let Some(p) = prod {
                raw.comp.push((i, j, at(p)));
            }
        }
    }
    let table = GroupoidTable::from_raw(raw)?;
    Ok(DirectProduct {
        table,
        factors: factors.iter().cloned().map(Arc::new).collect(),
        tuples,
        lookup,
    })
}

/// A group acting on a groupoid through automorphisms, stored as one
/// element permutation of the target per group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutAction {
    group: Arc<GroupoidTable>,
    target: Arc<GroupoidTable>,
    omega: Vec<Vec<usize>>,
}

impl AutAction {
    pub fn new(
        group: Arc<GroupoidTable>,
        target: Arc<GroupoidTable>,
        omega: Vec<Vec<usize>>,
    ) -> Result<Self, ProductError> {
        if omega.len() != group.len() || omega.iter().any(|p| p.len() != target.len()) {
            return Err(ProductError::Shape);
        }
        if omega.iter().flatten().any(|&x| x >= target.len()) {
            return Err(ProductError::Shape);
        }
        Ok(Self { group, target, omega })
    }

    /// Every group element acts as the identity.
    pub fn trivial(group: Arc<GroupoidTable>, target: Arc<GroupoidTable>) -> Self {
        let id: Vec<usize> = target.elements().collect();
        let omega = vec![id; group.len()];
        Self { group, target, omega }
    }

    pub fn group(&self) -> &Arc<GroupoidTable> {
        &self.group
    }

    pub fn target(&self) -> &Arc<GroupoidTable> {
        &self.target
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.omega
    }

    /// `ω_g(x)`.
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.omega[g][x]
    }

    pub fn is_trivial(&self) -> bool {
        self.omega
            .iter()
            .all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// The group's identity (its single object).
    pub fn unit(&self) -> usize {
        self.group.objects()[0]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new();
        let (grp, tgt) = (&*self.group, &*self.target);
        if grp.objects().len() != 1 {
            rep.push("group", Vec::new(), "acting table must have exactly one object".to_string());
            return rep;
        }
        for g in grp.elements() {
            let f = GroupoidFunctor::new(self.target.clone(), self.target.clone(), self.omega[g].clone())
                .expect("shape checked at construction");
            if !f.is_bijective() {
                rep.push("automorphism", vec![grp.name_of(g).to_string()], format!("omega({}) is not a bijection", grp.name_of(g)));
            } else if !f.is_functorial() {
                rep.push("automorphism", vec![grp.name_of(g).to_string()], format!("omega({}) is not functorial", grp.name_of(g)));
            }
            if tgt.objects().iter().any(|&e| !tgt.is_object(self.omega[g][e])) {
                rep.push("objects", vec![grp.name_of(g).to_string()], format!("omega({}) moves an object off the object set", grp.name_of(g)));
            }
        }
        let unit = self.unit();
        if self.omega[unit].iter().enumerate().any(|(i, &x)| i != x) {
            rep.push("unit", vec![grp.name_of(unit).to_string()], "omega(1) is not the identity".to_string());
        }
        for (g, h, gh) in grp.defined_products() {
            let composed = tgt.elements().all(|x| self.omega[gh][x] == self.omega[g][self.omega[h][x]]);
            if !composed {
                rep.push(
                    "homomorphism",
                    vec![grp.name_of(g).to_string(), grp.name_of(h).to_string()],
                    format!("omega({0} {1}) differs from omega({0}) omega({1})", grp.name_of(g), grp.name_of(h)),
                );
            }
        }
        rep
    }
}

/// The semidirect product table with its `(x, g)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectProduct {
    table: GroupoidTable,
    pairs: Vec<(usize, usize)>,
}

impl SemidirectProduct {
    pub fn table(&self) -> &GroupoidTable {
        &self.table
    }

    pub fn into_table(self) -> GroupoidTable {
        self.table
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index_of_pair(&self, x: usize, g: usize, group_len: usize) -> usize {
        x * group_len + g
    }
}

/// `G ×_ω Γ`: `(x, g)(z, h)` exists iff `d(x) = r(ω_g(z))` and equals
/// `(x ω_g(z), gh)`.
pub fn semidirect_product(act: &AutAction) -> Result<SemidirectProduct, ProductError> {
    let rep = act.validate();
    if !rep.passed() {
        return Err(ProductError::InvalidAction(format!("{rep}")));
    }
    let (t, grp) = (&*act.target, &*act.group);
    let m = grp.len();
    let unit = act.unit();
    let at = |x: usize, g: usize| x * m + g;
    let gmul = |g: usize, h: usize| grp.comp(g, h).expect("group table is total");
    let mut pairs = Vec::with_capacity(t.len() * m);
    let mut raw = RawTable {
        name: format!("{}x{}", t.name(), grp.name()),
        elements: Vec::new(),
        objects: Vec::new(),
        dom: Vec::new(),
        rng: Vec::new(),
        inv: Vec::new(),
        comp: Vec::new(),
    };
    for x in t.elements() {
        for g in grp.elements() {
            let i = pairs.len();
            pairs.push((x, g));
            raw.elements.push(naming::tuple([t.name_of(x), grp.name_of(g)]));
            if t.is_object(x) && g == unit {
                raw.objects.push(i);
            }
            let gi = grp.inv(g);
            raw.dom.push(at(act.act(gi, t.d(x)), unit));
            raw.rng.push(at(t.r(x), unit));
            raw.inv.push(at(act.act(gi, t.inv(x)), gi));
        }
    }
    for (i, &(x, g)) in pairs.iter().enumerate() {
        for (j, &(z, h)) in pairs.iter().enumerate() {
            let wz = act.act(g, z);
            if t.d(x) != t.r(wz) {
                continue;
            }
            let Some(xz) = t.comp(x, wz) else { continue };
            raw.comp.push((i, j, at(xz, gmul(g, h))));
        }
    }
    Ok(SemidirectProduct {
        table: GroupoidTable::from_raw(raw)?,
        pairs,
    })
}

/// The three conditions that characterize when a semidirect product is
/// direct. All three are always evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trichotomy {
    /// The identity set map from `G × Γ` to `G ×_ω Γ` is a functor.
    pub identity_is_homomorphism: bool,
    pub omega_trivial: bool,
    /// `G₀ × Γ` is normal in `G ×_ω Γ`.
    pub objects_normal: bool,
}

impl Trichotomy {
    pub fn agree(&self) -> bool {
        self.identity_is_homomorphism == self.omega_trivial && self.omega_trivial == self.objects_normal
    }
}

pub fn semidirect_trichotomy(act: &AutAction) -> Result<Trichotomy, ProductError> {
    let semi = semidirect_product(act)?;
    let direct = direct_product(&[(*act.target).clone(), (*act.group).clone()])?;
    let semi_table = Arc::new(semi.table);
    let direct_table = Arc::new(direct.table);
    // Both tables list (x, g) in the same lexicographic order.
    let identity = GroupoidFunctor::new(direct_table, semi_table.clone(), (0..semi.pairs.len()).collect())?;
    let objects_times_group: ElementSet = semi
        .pairs
        .iter()
        .enumerate()
        .filter(|(_, &(x, _))| act.target.is_object(x))
        .map(|(i, _)| i)
        .collect();
    Ok(Trichotomy {
        identity_is_homomorphism: identity.is_functorial(),
        omega_trivial: act.is_trivial(),
        objects_normal: is_normal(&semi_table, &objects_times_group),
    })
}

/// Result of recognizing `HG ≃ H ×_ω G` inside a groupoid.
#[derive(Debug, Clone)]
pub struct InternalSemidirect {
    /// Conjugation action of the subgroup on the normal subgroupoid.
    pub action: AutAction,
    pub semidirect: SemidirectProduct,
    /// The sub-table on `HG`.
    pub product: Arc<GroupoidTable>,
    /// `hg ↦ (h, g)`, verified to be an isomorphism.
    pub iso: GroupoidFunctor,
}

/// Builds the conjugation action of `sub` on the normal subgroupoid `h`
/// and the isomorphism `HG → H ×_ω G`.
///
/// Conjugation `k ↦ g k g⁻¹` must be defined on every element of `h`; it is
/// never extended beyond where the parent composes.
pub fn recognize_internal_semidirect(
    parent: &GroupoidTable,
    h: &ElementSet,
    sub: &ElementSet,
) -> Result<InternalSemidirect, ProductError> {
    if !is_normal(parent, h) {
        return Err(ProductError::NotNormal);
    }
    if sub.is_empty() || !is_subgroupoid(parent, sub).unwrap_or(false) {
        return Err(ProductError::NotASubgroup);
    }
    let first = *sub.iter().next().expect("nonempty");
    let e = parent.d(first);
    if sub.iter().any(|&g| parent.d(g) != e || parent.r(g) != e) {
        return Err(ProductError::NotASubgroup);
    }
    if let Some(&extra) = h.iter().find(|&&k| sub.contains(&k) && k != e) {
        return Err(ProductError::IntersectionTooLarge(parent.name_of(extra).to_string()));
    }
    let nm = |g: usize| parent.name_of(g).to_string();
    let h_table = Arc::new(parent.restrict(h, format!("{}|H", parent.name()))?);
    let g_table = Arc::new(parent.restrict(sub, format!("{}|G", parent.name()))?);
    let mut omega = Vec::with_capacity(g_table.len());
    for (gi_local, &g) in sub.iter().enumerate() {
        debug_assert_eq!(g_table.name_of(gi_local), parent.name_of(g));
        let g_inv = parent.inv(g);
        let mut perm = Vec::with_capacity(h_table.len());
        for &k in h {
            let conj = parent
                .comp_chain(&[g, k, g_inv])
                .ok_or_else(|| ProductError::ConjugationUndefined { g: nm(g), k: nm(k) })?;
            if !h.contains(&conj) {
                return Err(ProductError::ConjugationEscapes { g: nm(g), k: nm(k) });
            }
            perm.push(h_table.lookup(parent.name_of(conj))?);
        }
        omega.push(perm);
    }
    let action = AutAction::new(g_table.clone(), h_table.clone(), omega)?;
    let rep = action.validate();
    if !rep.passed() {
        return Err(ProductError::InvalidAction(format!("{rep}")));
    }

    let hg = product_set(parent, &[h.clone(), sub.clone()]);
    let mut factor: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for &k in h {
        for &g in sub {
            if !parent.composable(k, g) {
                continue;
            }
            let Some(kg) = parent.comp(k, g) else { continue };
            if factor.insert(kg, (k, g)).is_some() {
                return Err(ProductError::NonUniqueFactorization(nm(kg)));
            }
        }
    }
    let product = Arc::new(parent.restrict(&hg, format!("{}|HG", parent.name()))?);
    let semidirect = semidirect_product(&action)?;
    let m = g_table.len();
    let mut map = Vec::with_capacity(product.len());
    for &kg in &hg {
        let (k, g) = factor[&kg];
        let kl = h_table.lookup(parent.name_of(k))?;
        let gl = g_table.lookup(parent.name_of(g))?;
        map.push(semidirect.index_of_pair(kl, gl, m));
    }
    let iso = GroupoidFunctor::new(product.clone(), Arc::new(semidirect.table.clone()), map)?;
    if !iso.is_isomorphism() {
        return Err(ProductError::Invariant(format!(
            "hg -> (h, g) is not an isomorphism: {}",
            iso.verify()
        )));
    }
    Ok(InternalSemidirect {
        action,
        semidirect,
        product,
        iso,
    })
}
