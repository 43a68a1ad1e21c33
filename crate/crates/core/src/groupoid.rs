//! The finite groupoid table, its builders, the axiom scan and basic
//! structural queries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::report::ValidationReport;

/// A set of element indices of one table.
pub type ElementSet = BTreeSet<usize>;

/// Structural problems: things that prevent a table from being read at all,
/// as opposed to axiom violations, which [`GroupoidTable::validate`] reports.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("a groupoid needs at least one object")]
    NoObjects,
    #[error("element `{0}` is declared twice")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("element index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("`{0}` is not an object")]
    NotAnObject(String),
    #[error("arrow `{0}` has no declared inverse")]
    MissingInverse(String),
    #[error("inverse of `{element}` declared as both `{first}` and `{second}`")]
    ConflictingInverse {
        element: String,
        first: String,
        second: String,
    },
    #[error("inverse of `{0}` declared twice")]
    DuplicateInverse(String),
    #[error("`{g}` and `{h}` are not composable: d({g}) = {dg} but r({h}) = {rh}")]
    NotComposable {
        g: String,
        h: String,
        dg: String,
        rh: String,
    },
    #[error("product `{g} {h}` declared twice")]
    DuplicateProduct { g: String, h: String },
    #[error("product `{g} {h}` declared as both `{first}` and `{second}`")]
    ConflictingProduct {
        g: String,
        h: String,
        first: String,
        second: String,
    },
    #[error("set is empty")]
    EmptySet,
    #[error("set is not closed under inverse and composition (witness `{0}`)")]
    NotClosed(String),
    #[error("maps have inconsistent lengths")]
    LengthMismatch,
}

/// Index-level description of a table, with no defaults filled in.
///
/// This is the form derived constructions produce, and the form to use when
/// a table has to be deliberately broken (for example to exercise the axiom
/// scan).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub name: String,
    pub elements: Vec<String>,
    pub objects: Vec<usize>,
    pub dom: Vec<usize>,
    pub rng: Vec<usize>,
    pub inv: Vec<usize>,
    /// `(g, h, gh)` triples.
    pub comp: Vec<(usize, usize, usize)>,
}

/// A finite groupoid, or a candidate for one, as explicit tables.
///
/// Construction only checks structure (every map total, every id known).
/// Whether the table satisfies the groupoid axioms is answered by
/// [`GroupoidTable::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidTable {
    name: String,
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    objects: Vec<usize>,
    is_object: Vec<bool>,
    dom: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    // Dense n*n, row g holds the products g∘h.
    comp: Vec<Option<usize>>,
}

impl GroupoidTable {
    pub fn from_raw(raw: RawTable) -> Result<Self, TableError> {
        let RawTable {
            name,
            elements,
            objects,
            dom,
            rng,
            inv,
            comp: products,
        } = raw;
        let n = elements.len();
        if dom.len() != n || rng.len() != n || inv.len() != n {
            return Err(TableError::LengthMismatch);
        }
        if objects.is_empty() {
            return Err(TableError::NoObjects);
        }
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(TableError::DuplicateElement(e.clone()));
            }
        }
        let mut is_object = vec![false; n];
        for &o in &objects {
            let slot = is_object.get_mut(o).ok_or(TableError::IndexOutOfRange(o))?;
            if *slot {
                return Err(TableError::DuplicateElement(elements[o].clone()));
            }
            *slot = true;
        }
        let mut objects = objects;
        objects.sort_unstable();
        for g in 0..n {
            for m in [dom[g], rng[g]] {
                if m >= n {
                    return Err(TableError::IndexOutOfRange(m));
                }
                if !is_object[m] {
                    return Err(TableError::NotAnObject(elements[m].clone()));
                }
            }
            if inv[g] >= n {
                return Err(TableError::IndexOutOfRange(inv[g]));
            }
        }
        let mut comp = vec![None; n * n];
        for (g, h, k) in products {
            for i in [g, h, k] {
                if i >= n {
                    return Err(TableError::IndexOutOfRange(i));
                }
            }
            let slot = &mut comp[g * n + h];
            match *slot {
                None => *slot = Some(k),
                Some(prev) if prev == k => {}
                Some(prev) => {
                    return Err(TableError::ConflictingProduct {
                        g: elements[g].clone(),
                        h: elements[h].clone(),
                        first: elements[prev].clone(),
                        second: elements[k].clone(),
                    })
                }
            }
        }
        Ok(Self {
            name,
            elements,
            index,
            objects,
            is_object,
            dom,
            rng,
            inv,
            comp,
        })
    }

    pub fn to_raw(&self) -> RawTable {
        RawTable {
            name: self.name.clone(),
            elements: self.elements.clone(),
            objects: self.objects.clone(),
            dom: self.dom.clone(),
            rng: self.rng.clone(),
            inv: self.inv.clone(),
            comp: self.defined_products().collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> Range<usize> {
        0..self.elements.len()
    }

    pub fn element_names(&self) -> &[String] {
        &self.elements
    }

    pub fn name_of(&self, g: usize) -> &str {
        &self.elements[g]
    }

    pub fn names(&self, gs: &[usize]) -> Vec<String> {
        gs.iter().map(|&g| self.elements[g].clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize, TableError> {
        self.index_of(name)
            .ok_or_else(|| TableError::UnknownElement(name.to_string()))
    }

    /// Resolves a list of names into an element set.
    pub fn resolve_set<S: AsRef<str>>(&self, names: &[S]) -> Result<ElementSet, TableError> {
        names.iter().map(|n| self.lookup(n.as_ref())).collect()
    }

    /// Objects (identities) in declared element order.
    pub fn objects(&self) -> &[usize] {
        &self.objects
    }

    pub fn object_set(&self) -> ElementSet {
        self.objects.iter().copied().collect()
    }

    pub fn is_object(&self, g: usize) -> bool {
        self.is_object[g]
    }

    pub fn d(&self, g: usize) -> usize {
        self.dom[g]
    }

    pub fn r(&self, g: usize) -> usize {
        self.rng[g]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn composable(&self, g: usize, h: usize) -> bool {
        self.dom[g] == self.rng[h]
    }

    /// `g∘h` if the table defines it.
    pub fn comp(&self, g: usize, h: usize) -> Option<usize> {
        self.comp[g * self.len() + h]
    }

    /// Composes a chain `g₁∘g₂∘⋯∘gₙ` left to right, if every step exists.
    pub fn comp_chain(&self, chain: &[usize]) -> Option<usize> {
        let (&first, rest) = chain.split_first()?;
        rest.iter().try_fold(first, |acc, &h| {
            if self.composable(acc, h) {
                self.comp(acc, h)
            } else {
                None
            }
        })
    }

    /// All `(g, h, g∘h)` entries present in the table, row-major.
    pub fn defined_products(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.len();
        self.comp
            .iter()
            .enumerate()
            .filter_map(move |(i, k)| k.map(|k| (i / n, i % n, k)))
    }

    /// All composable pairs `(g, h)`, i.e. `d(g) = r(h)`, row-major.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.elements()
            .flat_map(move |g| self.elements().map(move |h| (g, h)))
            .filter(move |&(g, h)| self.composable(g, h))
    }

    /// Elements `g` with `d(g) = e`.
    pub fn star(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        self.elements().filter(move |&g| self.dom[g] == e)
    }

    /// Elements from `e` to `f`.
    pub fn hom(&self, e: usize, f: usize) -> impl Iterator<Item = usize> + '_ {
        self.elements()
            .filter(move |&g| self.dom[g] == e && self.rng[g] == f)
    }

    fn require_object(&self, e: usize) -> Result<(), TableError> {
        if e >= self.len() {
            return Err(TableError::IndexOutOfRange(e));
        }
        if !self.is_object[e] {
            return Err(TableError::NotAnObject(self.elements[e].clone()));
        }
        Ok(())
    }

    /// The isotropy group at `e`: elements with `d(g) = r(g) = e`.
    pub fn isotropy_group(&self, e: usize) -> Result<ElementSet, TableError> {
        self.require_object(e)?;
        Ok(self.hom(e, e).collect())
    }

    /// Union of all isotropy groups.
    pub fn iso_subgroupoid(&self) -> ElementSet {
        self.elements()
            .filter(|&g| self.dom[g] == self.rng[g])
            .collect()
    }

    /// Every ordered pair of objects is linked by some element.
    pub fn is_connected(&self) -> bool {
        let mut linked = BTreeSet::new();
        for g in self.elements() {
            linked.insert((self.dom[g], self.rng[g]));
        }
        self.objects
            .iter()
            .all(|&e| self.objects.iter().all(|&f| linked.contains(&(e, f))))
    }

    /// Is the set closed under inverse and under every defined composition?
    /// On failure returns the first element (in declared order) whose inverse
    /// or product escapes.
    pub(crate) fn closure_witness(&self, set: &ElementSet) -> Option<usize> {
        for &g in set {
            if !set.contains(&self.inv[g]) {
                return Some(g);
            }
            for &h in set {
                if self.composable(g, h) {
                    match self.comp(g, h) {
                        Some(k) if set.contains(&k) => {}
                        _ => return Some(g),
                    }
                }
            }
        }
        None
    }

    /// The sub-table on a closed subset, keeping the parent's order and names.
    pub fn restrict(&self, set: &ElementSet, name: impl Into<String>) -> Result<Self, TableError> {
        if set.is_empty() {
            return Err(TableError::EmptySet);
        }
        if let Some(&bad) = set.iter().find(|&&g| g >= self.len()) {
            return Err(TableError::IndexOutOfRange(bad));
        }
        if let Some(w) = self.closure_witness(set) {
            return Err(TableError::NotClosed(self.elements[w].clone()));
        }
        let members: Vec<usize> = set.iter().copied().collect();
        let local: BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let at = |g: usize| -> Result<usize, TableError> {
            local
                .get(&g)
                .copied()
                .ok_or_else(|| TableError::NotClosed(self.elements[g].clone()))
        };
        let mut raw = RawTable {
            name: name.into(),
            elements: self.names(&members),
            objects: Vec::new(),
            dom: Vec::with_capacity(members.len()),
            rng: Vec::with_capacity(members.len()),
            inv: Vec::with_capacity(members.len()),
            comp: Vec::new(),
        };
        for (i, &g) in members.iter().enumerate() {
            if self.is_object[g] {
                raw.objects.push(i);
            }
            raw.dom.push(at(self.dom[g])?);
            raw.rng.push(at(self.rng[g])?);
            raw.inv.push(at(self.inv[g])?);
            for (j, &h) in members.iter().enumerate() {
                if let Some(k) = self.comp(g, h) {
                    raw.comp.push((i, j, at(k)?));
                }
            }
        }
        Self::from_raw(raw)
    }

    /// Scans every groupoid axiom and reports each violated instance.
    pub fn validate(&self) -> ValidationReport {
        validate_groupoid(self)
    }
}

/// Exhaustive axiom scan. Each violation names the axiom and its witnesses;
/// the report passes iff the table is a groupoid.
pub fn validate_groupoid(t: &GroupoidTable) -> ValidationReport {
    let mut report = ValidationReport::new();
    let nm = |g: usize| t.name_of(g).to_string();

    for &e in t.objects() {
        if t.d(e) != e || t.r(e) != e || t.inv(e) != e {
            report.push(
                "object",
                vec![nm(e)],
                format!("object {} must satisfy d(e) = r(e) = inv(e) = e", nm(e)),
            );
        }
    }

    for (g, h, _) in t.defined_products() {
        if !t.composable(g, h) {
            report.push(
                "composability",
                vec![nm(g), nm(h)],
                format!(
                    "product {} {} is defined although d({}) = {} differs from r({}) = {}",
                    nm(g),
                    nm(h),
                    nm(g),
                    nm(t.d(g)),
                    nm(h),
                    nm(t.r(h))
                ),
            );
        }
    }

    for (g, h) in t.composable_pairs() {
        match t.comp(g, h) {
            None => report.push(
                "closure",
                vec![nm(g), nm(h)],
                format!(
                    "{} {} is composable (d({}) = {} = r({})) but has no product",
                    nm(g),
                    nm(h),
                    nm(g),
                    nm(t.d(g)),
                    nm(h)
                ),
            ),
            Some(k) => {
                if t.d(k) != t.d(h) || t.r(k) != t.r(g) {
                    report.push(
                        "domain-range",
                        vec![nm(g), nm(h), nm(k)],
                        format!(
                            "{} {} = {} but d/r of the product are {} -> {}, expected {} -> {}",
                            nm(g),
                            nm(h),
                            nm(k),
                            nm(t.d(k)),
                            nm(t.r(k)),
                            nm(t.d(h)),
                            nm(t.r(g))
                        ),
                    );
                }
            }
        }
    }

    for g in t.elements() {
        let (dg, rg) = (t.d(g), t.r(g));
        if let Some(k) = t.comp(rg, g) {
            if k != g {
                report.push(
                    "left-identity",
                    vec![nm(rg), nm(g)],
                    format!("{} {} = {}, expected {}", nm(rg), nm(g), nm(k), nm(g)),
                );
            }
        }
        if let Some(k) = t.comp(g, dg) {
            if k != g {
                report.push(
                    "right-identity",
                    vec![nm(g), nm(dg)],
                    format!("{} {} = {}, expected {}", nm(g), nm(dg), nm(k), nm(g)),
                );
            }
        }
    }

    for g in t.elements() {
        let gi = t.inv(g);
        if t.inv(gi) != g {
            report.push(
                "involution",
                vec![nm(g), nm(gi)],
                format!(
                    "inv(inv({})) = {}, expected {}",
                    nm(g),
                    nm(t.inv(gi)),
                    nm(g)
                ),
            );
        }
        let left_ok = t.composable(gi, g) && t.comp(gi, g) == Some(t.d(g));
        let right_ok = t.composable(g, gi) && t.comp(g, gi) == Some(t.r(g));
        if !left_ok || !right_ok {
            report.push(
                "inverse",
                vec![nm(g), nm(gi)],
                format!(
                    "{} must satisfy inv(g) g = d(g) = {} and g inv(g) = r(g) = {} with inv(g) = {}",
                    nm(g),
                    nm(t.d(g)),
                    nm(t.r(g)),
                    nm(gi)
                ),
            );
        }
    }

    for (g, h) in t.composable_pairs() {
        let Some(k) = t.comp(g, h) else { continue };
        let (hi, gi) = (t.inv(h), t.inv(g));
        if let Some(m) = t.comp(hi, gi) {
            if m != t.inv(k) {
                report.push(
                    "inverse-product",
                    vec![nm(g), nm(h)],
                    format!(
                        "inv({} {}) = {} but inv({}) inv({}) = {}",
                        nm(g),
                        nm(h),
                        nm(t.inv(k)),
                        nm(h),
                        nm(g),
                        nm(m)
                    ),
                );
            }
        }
    }

    for (g, h) in t.composable_pairs() {
        let Some(gh) = t.comp(g, h) else { continue };
        for k in t.elements() {
            if !t.composable(h, k) {
                continue;
            }
            let Some(hk) = t.comp(h, k) else { continue };
            let left = if t.composable(gh, k) { t.comp(gh, k) } else { None };
            let right = if t.composable(g, hk) { t.comp(g, hk) } else { None };
            if let (Some(l), Some(rr)) = (left, right) {
                if l != rr {
                    report.push(
                        "associativity",
                        vec![nm(g), nm(h), nm(k)],
                        format!(
                            "({} {}) {} = {} but {} ({} {}) = {}",
                            nm(g),
                            nm(h),
                            nm(k),
                            nm(l),
                            nm(g),
                            nm(h),
                            nm(k),
                            nm(rr)
                        ),
                    );
                }
            }
        }
    }

    report
}

/// Disjoint union; element `a` of the `i`-th table becomes `i.a`.
pub fn disjoint_union(tables: &[GroupoidTable], name: impl Into<String>) -> Result<GroupoidTable, TableError> {
    let mut raw = RawTable {
        name: name.into(),
        elements: Vec::new(),
        objects: Vec::new(),
        dom: Vec::new(),
        rng: Vec::new(),
        inv: Vec::new(),
        comp: Vec::new(),
    };
    for (i, t) in tables.iter().enumerate() {
        let off = raw.elements.len();
        raw.elements
            .extend(t.element_names().iter().map(|e| format!("{i}.{e}")));
        raw.objects.extend(t.objects().iter().map(|&o| o + off));
        for g in t.elements() {
            raw.dom.push(t.d(g) + off);
            raw.rng.push(t.r(g) + off);
            raw.inv.push(t.inv(g) + off);
        }
        raw.comp
            .extend(t.defined_products().map(|(g, h, k)| (g + off, h + off, k + off)));
    }
    GroupoidTable::from_raw(raw)
}

/// Name-level builder mirroring the GPD text format.
///
/// Defaults filled in by [`TableBuilder::build`]: an object is its own
/// domain, range and inverse; `inv a = b` implies `inv b = a` unless `b` has
/// its own declaration; products with an identity factor default to the
/// other factor. Explicit declarations always win over defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableBuilder {
    pub(crate) name: String,
    pub(crate) objects: Vec<String>,
    pub(crate) arrows: Vec<(String, String, String)>,
    pub(crate) inverses: Vec<(String, String)>,
    pub(crate) products: Vec<(String, String, String)>,
}

/// Elements, d, r and inverse resolved from a builder; products untouched.
pub(crate) struct Skeleton {
    pub name: String,
    pub elements: Vec<String>,
    pub index: BTreeMap<String, usize>,
    pub objects: Vec<usize>,
    pub dom: Vec<usize>,
    pub rng: Vec<usize>,
    pub inv: Vec<usize>,
}

impl TableBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn object(&mut self, id: impl Into<String>) -> &mut Self {
        self.objects.push(id.into());
        self
    }

    pub fn objects<I, S>(&mut self, ids: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.objects.extend(ids.into_iter().map(Into::into));
        self
    }

    /// A non-identity element `id : d -> r`.
    pub fn arrow(&mut self, id: impl Into<String>, d: impl Into<String>, r: impl Into<String>) -> &mut Self {
        self.arrows.push((id.into(), d.into(), r.into()));
        self
    }

    pub fn inverse(&mut self, a: impl Into<String>, b: impl Into<String>) -> &mut Self {
        self.inverses.push((a.into(), b.into()));
        self
    }

    /// Declares `g∘h = k`.
    pub fn product(&mut self, g: impl Into<String>, h: impl Into<String>, k: impl Into<String>) -> &mut Self {
        self.products.push((g.into(), h.into(), k.into()));
        self
    }

    pub(crate) fn skeleton(&self) -> Result<Skeleton, TableError> {
        if self.objects.is_empty() {
            return Err(TableError::NoObjects);
        }
        let mut elements: Vec<String> = self.objects.clone();
        elements.extend(self.arrows.iter().map(|(id, _, _)| id.clone()));
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(TableError::DuplicateElement(e.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| TableError::UnknownElement(s.to_string()))
        };
        let n_obj = self.objects.len();
        let mut dom: Vec<usize> = (0..n_obj).collect();
        let mut rng: Vec<usize> = (0..n_obj).collect();
        for (_, d, r) in &self.arrows {
            for end in [d, r] {
                if lookup(end)? >= n_obj {
                    return Err(TableError::NotAnObject(end.clone()));
                }
            }
            dom.push(lookup(d)?);
            rng.push(lookup(r)?);
        }

        let n = elements.len();
        let mut declared: Vec<Option<usize>> = vec![None; n];
        for (a, b) in &self.inverses {
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            match declared[ia] {
                None => declared[ia] = Some(ib),
                Some(prev) if prev == ib => return Err(TableError::DuplicateInverse(a.clone())),
                Some(prev) => {
                    return Err(TableError::ConflictingInverse {
                        element: a.clone(),
                        first: elements[prev].clone(),
                        second: b.clone(),
                    })
                }
            }
        }
        let mut inv = declared.clone();
        for (a, ia) in declared.iter().enumerate() {
            if let Some(b) = *ia {
                if inv[b].is_none() {
                    inv[b] = Some(a);
                }
            }
        }
        let inv = inv
            .into_iter()
            .enumerate()
            .map(|(g, i)| match i {
                Some(i) => Ok(i),
                None if g < n_obj => Ok(g),
                None => Err(TableError::MissingInverse(elements[g].clone())),
            })
            .collect::<Result<Vec<_>, _>>()?;

        Ok(Skeleton {
            name: self.name.clone(),
            elements,
            index,
            objects: (0..n_obj).collect(),
            dom,
            rng,
            inv,
        })
    }

    /// Declared products resolved to indices, with composability checked.
    pub(crate) fn resolved_products(&self, sk: &Skeleton) -> Result<Vec<(usize, usize, usize)>, TableError> {
        let lookup = |s: &str| {
            sk.index
                .get(s)
                .copied()
                .ok_or_else(|| TableError::UnknownElement(s.to_string()))
        };
        let mut out = Vec::with_capacity(self.products.len());
        for (g, h, k) in &self.products {
            let (ig, ih, ik) = (lookup(g)?, lookup(h)?, lookup(k)?);
            if sk.dom[ig] != sk.rng[ih] {
                return Err(TableError::NotComposable {
                    g: g.clone(),
                    h: h.clone(),
                    dg: sk.elements[sk.dom[ig]].clone(),
                    rh: sk.elements[sk.rng[ih]].clone(),
                });
            }
            out.push((ig, ih, ik));
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<GroupoidTable, TableError> {
        let sk = self.skeleton()?;
        let n = sk.elements.len();
        let mut comp: Vec<Option<usize>> = vec![None; n * n];
        for (g, h, k) in self.resolved_products(&sk)? {
            let slot = &mut comp[g * n + h];
            match *slot {
                None => *slot = Some(k),
                Some(prev) if prev == k => {
                    return Err(TableError::DuplicateProduct {
                        g: sk.elements[g].clone(),
                        h: sk.elements[h].clone(),
                    })
                }
                Some(prev) => {
                    return Err(TableError::ConflictingProduct {
                        g: sk.elements[g].clone(),
                        h: sk.elements[h].clone(),
                        first: sk.elements[prev].clone(),
                        second: sk.elements[k].clone(),
                    })
                }
            }
        }
        let n_obj = sk.objects.len();
        for g in 0..n {
            for h in 0..n {
                if sk.dom[g] != sk.rng[h] || comp[g * n + h].is_some() {
                    continue;
                }
                if g < n_obj {
                    comp[g * n + h] = Some(h);
                } else if h < n_obj {
                    comp[g * n + h] = Some(g);
                }
            }
        }
        let products = comp
            .iter()
            .enumerate()
            .filter_map(|(i, k)| k.map(|k| (i / n, i % n, k)))
            .collect();
        GroupoidTable::from_raw(RawTable {
            name: sk.name,
            elements: sk.elements,
            objects: sk.objects,
            dom: sk.dom,
            rng: sk.rng,
            inv: sk.inv,
            comp: products,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn z2() -> GroupoidTable {
        let mut b = TableBuilder::new("Z2");
        b.object("1").arrow("a", "1", "1").inverse("a", "a").product("a", "a", "1");
        b.build().unwrap()
    }

    #[test]
    fn z2_is_a_groupoid() {
        let t = z2();
        assert!(t.validate().passed(), "{}", t.validate());
        assert_eq!(t.len(), 2);
        assert_eq!(t.isotropy_group(0).unwrap(), t.elements().collect());
    }

    #[test]
    fn builder_fills_identity_products_and_reverse_inverse() {
        let t = catalog::e8();
        let u = t.lookup("u").unwrap();
        let ui = t.lookup("u-").unwrap();
        let x = t.lookup("x").unwrap();
        let y = t.lookup("y").unwrap();
        assert_eq!(t.inv(ui), u);
        assert_eq!(t.comp(y, u), Some(u));
        assert_eq!(t.comp(u, x), Some(u));
        assert_eq!(t.comp(x, u), None);
    }

    #[test]
    fn printed_seven_element_table_is_not_closed_at_u_v() {
        let t = catalog::example_printed().build().unwrap();
        let report = t.validate();
        assert!(!report.passed());
        let u = "u".to_string();
        let v = "v".to_string();
        assert!(report
            .with_tag("closure")
            .any(|viol| viol.witness == vec![u.clone(), v.clone()]));
    }

    #[test]
    fn e8_queries() {
        let t = catalog::e8();
        assert!(t.validate().passed(), "{}", t.validate());
        let x = t.lookup("x").unwrap();
        let iso_x = t.isotropy_group(x).unwrap();
        assert_eq!(iso_x, t.resolve_set(&["x", "a"]).unwrap());
        assert_eq!(t.iso_subgroupoid(), t.resolve_set(&["x", "y", "a", "b"]).unwrap());
        assert!(t.is_connected());
        assert_eq!(
            t.isotropy_group(t.lookup("u").unwrap()),
            Err(TableError::NotAnObject("u".into()))
        );
    }

    #[test]
    fn disjoint_union_of_groups_is_not_connected() {
        let t = disjoint_union(&[z2(), z2()], "2Z2").unwrap();
        assert!(t.validate().passed());
        assert!(!t.is_connected());
        assert!(z2().is_connected());
    }

    #[test]
    fn builder_errors() {
        let mut b = TableBuilder::new("bad");
        b.object("e").arrow("a", "e", "e");
        assert_eq!(b.build(), Err(TableError::MissingInverse("a".into())));

        let mut b = TableBuilder::new("bad");
        b.objects(["x", "y"]).arrow("u", "x", "y").inverse("u", "w");
        b.arrow("w", "y", "x").product("u", "u", "x");
        assert!(matches!(b.build(), Err(TableError::NotComposable { .. })));

        let mut b = TableBuilder::new("bad");
        b.object("e").arrow("a", "e", "e").inverse("a", "a");
        b.product("a", "a", "e").product("a", "a", "a");
        assert!(matches!(b.build(), Err(TableError::ConflictingProduct { .. })));

        let mut b = TableBuilder::new("bad");
        b.object("e").arrow("a", "e", "q");
        assert_eq!(b.build(), Err(TableError::UnknownElement("q".into())));

        assert_eq!(TableBuilder::new("none").build(), Err(TableError::NoObjects));
    }

    #[test]
    fn restrict_requires_closure() {
        let t = catalog::e8();
        let u = t.resolve_set(&["u"]).unwrap();
        assert!(matches!(t.restrict(&u, "s"), Err(TableError::NotClosed(_))));
        let h1 = t.resolve_set(&["u", "u-", "x", "y"]).unwrap();
        let sub = t.restrict(&h1, "H1").unwrap();
        assert!(sub.validate().passed());
        assert_eq!(sub.len(), 4);
    }

    #[test]
    fn comp_chain_follows_composability() {
        let t = catalog::e8();
        let id = |s| t.lookup(s).unwrap();
        assert_eq!(t.comp_chain(&[id("v"), id("u")]), Some(id("a")));
        assert_eq!(t.comp_chain(&[id("u"), id("v")]), Some(id("b")));
        assert_eq!(t.comp_chain(&[id("u"), id("u")]), None);
        assert_eq!(t.comp_chain(&[id("a"), id("v"), id("u"), id("v")]), Some(id("v")));
    }
}
