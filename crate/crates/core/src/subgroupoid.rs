//! Subgroupoid predicates, subset products, restricted tuples and the
//! internal direct product characterization.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::functor::{FunctorError, GroupoidFunctor};
use crate::groupoid::{ElementSet, GroupoidTable};
use crate::product::{direct_product, DirectProduct, ProductError};
use crate::report::ValidationReport;

/// Largest parent accepted by [`wide_subgroupoids`].
pub const ENUMERATION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubgroupoidError {
    #[error("empty element set")]
    Empty,
    #[error("element index {0} is outside the parent")]
    OutOfRange(usize),
    #[error("empty family of subgroupoids")]
    EmptyFamily,
    #[error("set {index} is not a subgroupoid (witness `{witness}`)")]
    NotSubgroupoid { index: usize, witness: String },
    #[error("set {index} is not wide (missing object `{witness}`)")]
    NotWide { index: usize, witness: String },
    #[error("condition ({condition}) fails: {witness:?}")]
    ConditionFailed {
        condition: &'static str,
        witness: Vec<String>,
    },
    #[error("enumeration is capped at {cap} elements, parent has {len}")]
    TooLarge { cap: usize, len: usize },
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
}

fn check_members(parent: &GroupoidTable, s: &ElementSet) -> Result<(), SubgroupoidError> {
    if s.is_empty() {
        return Err(SubgroupoidError::Empty);
    }
    match s.iter().find(|&&g| g >= parent.len()) {
        Some(&g) => Err(SubgroupoidError::OutOfRange(g)),
        None => Ok(()),
    }
}

/// Closed under inverses and under every defined product.
pub fn is_subgroupoid(parent: &GroupoidTable, s: &ElementSet) -> Result<bool, SubgroupoidError> {
    check_members(parent, s)?;
    Ok(parent.closure_witness(s).is_none())
}

fn require_subgroupoid(parent: &GroupoidTable, s: &ElementSet, index: usize) -> Result<(), SubgroupoidError> {
    check_members(parent, s)?;
    match parent.closure_witness(s) {
        None => Ok(()),
        Some(w) => Err(SubgroupoidError::NotSubgroupoid {
            index,
            witness: parent.name_of(w).to_string(),
        }),
    }
}

fn require_wide(parent: &GroupoidTable, s: &ElementSet, index: usize) -> Result<(), SubgroupoidError> {
    require_subgroupoid(parent, s, index)?;
    match parent.objects().iter().find(|e| !s.contains(e)) {
        None => Ok(()),
        Some(&e) => Err(SubgroupoidError::NotWide {
            index,
            witness: parent.name_of(e).to_string(),
        }),
    }
}

/// A subgroupoid containing every object. Errors if `s` is not a
/// subgroupoid.
pub fn is_wide(parent: &GroupoidTable, s: &ElementSet) -> Result<bool, SubgroupoidError> {
    require_subgroupoid(parent, s, 0)?;
    Ok(parent.objects().iter().all(|e| s.contains(e)))
}

/// The smallest subgroupoid containing `s`.
pub fn generated_subgroupoid(parent: &GroupoidTable, s: &ElementSet) -> ElementSet {
    let mut out = s.clone();
    loop {
        let mut add = Vec::new();
        for &g in &out {
            let gi = parent.inv(g);
            if !out.contains(&gi) {
                add.push(gi);
            }
            for &h in &out {
                if let Some(k) = parent.comp(g, h) {
                    if !out.contains(&k) {
                        add.push(k);
                    }
                }
            }
        }
        if add.is_empty() {
            return out;
        }
        out.extend(add);
    }
}

/// `g⁻¹ S g = {g⁻¹ h g : h ∈ S, r(h) = d(h) = r(g)}`.
pub fn conjugate_set(parent: &GroupoidTable, s: &ElementSet, g: usize) -> ElementSet {
    let gi = parent.inv(g);
    let rg = parent.r(g);
    s.iter()
        .filter(|&&h| parent.d(h) == rg && parent.r(h) == rg)
        .filter_map(|&h| parent.comp_chain(&[gi, h, g]))
        .collect()
}

/// First `g` whose conjugate of `s` escapes `s`.
fn normality_witness(parent: &GroupoidTable, s: &ElementSet) -> Option<usize> {
    parent.elements().find(|&g| !conjugate_set(parent, s, g).is_subset(s))
}

/// Wide, and `g⁻¹ S g ⊆ S` for every `g`.
pub fn is_normal(parent: &GroupoidTable, s: &ElementSet) -> bool {
    matches!(is_wide(parent, s), Ok(true)) && normality_witness(parent, s).is_none()
}

/// `S ∩ G_e`.
fn local_part(parent: &GroupoidTable, s: &ElementSet, e: usize) -> ElementSet {
    s.iter()
        .copied()
        .filter(|&h| parent.d(h) == e && parent.r(h) == e)
        .collect()
}

/// The local form of normality: `g⁻¹ S_{r(g)} g = S_{d(g)}` for every `g`,
/// where `S_e = S ∩ G_e`. Errors unless `s` is wide.
pub fn is_normal_bw(parent: &GroupoidTable, s: &ElementSet) -> Result<bool, SubgroupoidError> {
    require_wide(parent, s, 0)?;
    Ok(parent.elements().all(|g| {
        let conj = conjugate_set(parent, &local_part(parent, s, parent.r(g)), g);
        conj == local_part(parent, s, parent.d(g))
    }))
}

/// `X₁⋯Xₙ`: every product of a composable chain `x₁⋯xₙ` with `xᵢ ∈ Xᵢ`.
/// The empty product is the object set.
pub fn product_set(parent: &GroupoidTable, sets: &[ElementSet]) -> ElementSet {
    let Some((first, rest)) = sets.split_first() else {
        return parent.object_set();
    };
    let mut cur = first.clone();
    for s in rest {
        let mut next = ElementSet::new();
        for &p in &cur {
            for &x in s {
                if let Some(k) = parent.comp(p, x) {
                    next.insert(k);
                }
            }
        }
        cur = next;
    }
    cur
}

/// `(X₁×⋯×Xₙ)^(n)`: tuples with `d(xᵢ) = r(xᵢ₊₁)`, in lexicographic order.
pub fn restricted_tuples(parent: &GroupoidTable, sets: &[ElementSet]) -> Vec<Vec<usize>> {
    fn go(parent: &GroupoidTable, sets: &[ElementSet], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == sets.len() {
            out.push(cur.clone());
            return;
        }
        for &x in &sets[i] {
            if let Some(&prev) = cur.last() {
                if parent.d(prev) != parent.r(x) {
                    continue;
                }
            }
            cur.push(x);
            go(parent, sets, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if !sets.is_empty() {
        go(parent, sets, &mut Vec::with_capacity(sets.len()), &mut out);
    }
    out
}

/// Outcome of testing whether the restricted tuples form a subgroupoid of
/// the `n`-fold direct product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuplesCheck {
    /// Direct closure test: nonempty, closed under componentwise inverse
    /// and componentwise product.
    pub direct: bool,
    /// Every tuple has `r(hᵢ) = d(hᵢ₊₁)` (and there is at least one tuple).
    pub criterion: bool,
    /// For wide inputs with `n ≥ 2`: every `Hᵢ` equals `Iso(Hᵢ)`.
    pub iso_criterion: Option<bool>,
    pub tuple_count: usize,
    /// Witnesses for the direct test and the criterion.
    pub report: ValidationReport,
}

impl TuplesCheck {
    pub fn agree(&self) -> bool {
        self.direct == self.criterion && self.iso_criterion.is_none_or(|c| c == self.direct)
    }
}

pub fn tuples_subgroupoid_check(
    parent: &GroupoidTable,
    subs: &[ElementSet],
) -> Result<TuplesCheck, SubgroupoidError> {
    if subs.is_empty() {
        return Err(SubgroupoidError::EmptyFamily);
    }
    for (i, s) in subs.iter().enumerate() {
        require_subgroupoid(parent, s, i)?;
    }
    let tuples = restricted_tuples(parent, subs);
    let members: alloc::collections::BTreeSet<&[usize]> = tuples.iter().map(|t| t.as_slice()).collect();
    let names = |t: &[usize]| t.iter().map(|&g| parent.name_of(g).to_string()).collect::<Vec<_>>();
    let mut report = ValidationReport::new();

    let mut direct = !tuples.is_empty();
    if tuples.is_empty() {
        report.push("empty", Vec::new(), "no composable tuples".to_string());
    }
    'outer: for t in &tuples {
        let ti: Vec<usize> = t.iter().map(|&g| parent.inv(g)).collect();
        if !members.contains(ti.as_slice()) {
            report.push("tuple-inverse", names(t), "componentwise inverse is not a composable tuple".to_string());
            direct = false;
            break;
        }
        for s in &tuples {
            let prod: Option<Vec<usize>> = t.iter().zip(s).map(|(&g, &h)| parent.comp(g, h)).collect();
            if let Some(p) = prod {
                if !members.contains(p.as_slice()) {
                    let mut w = names(t);
                    w.extend(names(s));
                    report.push("tuple-product", w, "componentwise product is not a composable tuple".to_string());
                    direct = false;
                    break 'outer;
                }
            }
        }
    }

    let mut criterion = !tuples.is_empty();
    if let Some(t) = tuples
        .iter()
        .find(|t| t.windows(2).any(|w| parent.r(w[0]) != parent.d(w[1])))
    {
        report.push("criterion", names(t), "r(h_i) differs from d(h_(i+1))".to_string());
        criterion = false;
    }

    let wide = subs
        .iter()
        .all(|s| parent.objects().iter().all(|e| s.contains(e)));
    let iso_criterion = (wide && subs.len() >= 2).then(|| {
        subs.iter()
            .all(|s| s.iter().all(|&h| parent.d(h) == parent.r(h)))
    });
    Ok(TuplesCheck {
        direct,
        criterion,
        iso_criterion,
        tuple_count: tuples.len(),
        report,
    })
}

/// One condition of the internal direct product characterization, with
/// the first failure witness in declared element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub holds: bool,
    pub witness: Vec<String>,
}

impl Condition {
    fn ok() -> Self {
        Self {
            holds: true,
            witness: Vec::new(),
        }
    }

    fn fail(witness: Vec<String>) -> Self {
        Self {
            holds: false,
            witness,
        }
    }
}

/// The five conditions:
/// (i) `G = H₁⋯Hₙ`; (ii) every `Hᵢ` normal; (iii) `Hᵢ ∩ ∏_{j≠i} Hⱼ = G₀`;
/// (iv) unique composable factorization; (v) elements of distinct `Hᵢ`
/// commute when they are loops at a common object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectReport {
    pub generates: Condition,
    pub normal: Condition,
    pub trivial_intersections: Condition,
    pub unique_factorization: Condition,
    pub commuting: Condition,
}

impl DirectReport {
    pub fn first_three(&self) -> bool {
        self.generates.holds && self.normal.holds && self.trivial_intersections.holds
    }

    pub fn last_two(&self) -> bool {
        self.unique_factorization.holds && self.commuting.holds
    }

    pub fn all(&self) -> bool {
        self.first_three() && self.last_two()
    }

    pub fn conditions(&self) -> [(&'static str, &Condition); 5] {
        [
            ("i", &self.generates),
            ("ii", &self.normal),
            ("iii", &self.trivial_intersections),
            ("iv", &self.unique_factorization),
            ("v", &self.commuting),
        ]
    }
}

pub fn internal_direct_report(
    parent: &GroupoidTable,
    subs: &[ElementSet],
) -> Result<DirectReport, SubgroupoidError> {
    if subs.is_empty() {
        return Err(SubgroupoidError::EmptyFamily);
    }
    for (i, s) in subs.iter().enumerate() {
        require_wide(parent, s, i)?;
    }
    let nm = |g: usize| parent.name_of(g).to_string();

    let product = product_set(parent, subs);
    let generates = match parent.elements().find(|g| !product.contains(g)) {
        None => Condition::ok(),
        Some(g) => Condition::fail(vec![nm(g)]),
    };

    let mut normal = Condition::ok();
    for (i, s) in subs.iter().enumerate() {
        if let Some(g) = normality_witness(parent, s) {
            normal = Condition::fail(vec![format!("H{}", i + 1), nm(g)]);
            break;
        }
    }

    let objects = parent.object_set();
    let mut trivial_intersections = Condition::ok();
    for (i, s) in subs.iter().enumerate() {
        let others: Vec<ElementSet> = subs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, t)| t.clone())
            .collect();
        let rest = product_set(parent, &others);
        let meet: ElementSet = s.intersection(&rest).copied().collect();
        if meet != objects {
            let w = meet
                .symmetric_difference(&objects)
                .next()
                .copied()
                .expect("sets differ");
            trivial_intersections = Condition::fail(vec![format!("H{}", i + 1), nm(w)]);
            break;
        }
    }

    let mut count = vec![0usize; parent.len()];
    for t in restricted_tuples(parent, subs) {
        let g = parent.comp_chain(&t).expect("restricted tuples compose");
        count[g] += 1;
    }
    let unique_factorization = match parent.elements().find(|&g| count[g] != 1) {
        None => Condition::ok(),
        Some(g) => Condition::fail(vec![nm(g)]),
    };

    let mut commuting = Condition::ok();
    'scan: for (i, si) in subs.iter().enumerate() {
        for (j, sj) in subs.iter().enumerate() {
            if i == j {
                continue;
            }
            for &x in si {
                let e = parent.d(x);
                if parent.r(x) != e {
                    continue;
                }
                for &y in sj {
                    if parent.d(y) != e || parent.r(y) != e {
                        continue;
                    }
                    if parent.comp(x, y) != parent.comp(y, x) {
                        commuting = Condition::fail(vec![nm(x), nm(y)]);
                        break 'scan;
                    }
                }
            }
        }
    }

    Ok(DirectReport {
        generates,
        normal,
        trivial_intersections,
        unique_factorization,
        commuting,
    })
}

/// The factorization map `h₁⋯hₙ ↦ (h₁,…,hₙ)` into `Gⁿ`, with its
/// functoriality report. The map is always injective when built; whether it
/// is a functor is reported, not assumed.
#[derive(Debug, Clone)]
pub struct DirectEmbedding {
    pub product: DirectProduct,
    pub functor: GroupoidFunctor,
    pub report: ValidationReport,
    /// The image equals the restricted tuple set.
    pub image_is_restricted: bool,
}

impl DirectEmbedding {
    pub fn is_functorial(&self) -> bool {
        self.report.passed()
    }
}

/// Builds the factorization map. Errors with the first failing condition of
/// [`internal_direct_report`].
pub fn embed_direct(
    parent: &GroupoidTable,
    subs: &[ElementSet],
) -> Result<DirectEmbedding, SubgroupoidError> {
    let rep = internal_direct_report(parent, subs)?;
    if let Some((name, c)) = rep.conditions().into_iter().find(|(_, c)| !c.holds) {
        return Err(SubgroupoidError::ConditionFailed {
            condition: name,
            witness: c.witness.clone(),
        });
    }
    let copies: Vec<GroupoidTable> = subs.iter().map(|_| parent.clone()).collect();
    let product = direct_product(&copies)?;
    let tuples = restricted_tuples(parent, subs);
    let mut map = vec![usize::MAX; parent.len()];
    let mut image = ElementSet::new();
    for t in &tuples {
        let g = parent.comp_chain(t).expect("restricted tuples compose");
        let idx = product.index_of_tuple(t).expect("tuple of parent elements");
        map[g] = idx;
        image.insert(idx);
    }
    let functor = GroupoidFunctor::new(
        Arc::new(parent.clone()),
        Arc::new(product.table().clone()),
        map,
    )?;
    let report = functor.verify();
    let image_is_restricted = functor.image() == image && image.len() == tuples.len();
    Ok(DirectEmbedding {
        product,
        functor,
        report,
        image_is_restricted,
    })
}

/// Pulls back the coordinate subgroupoids
/// `Kᵢ = (G₁)₀ × ⋯ × Gᵢ × ⋯ × (Gₙ)₀` along a functor into a direct
/// product: `Hᵢ = F⁻¹(Kᵢ)`.
pub fn pullback_factors(f: &GroupoidFunctor, product: &DirectProduct) -> Vec<ElementSet> {
    let n = product.factors().len();
    (0..n)
        .map(|i| {
            f.source()
                .elements()
                .filter(|&g| {
                    let t = product.tuple(f.apply(g));
                    t.iter()
                        .enumerate()
                        .all(|(j, &c)| j == i || product.factors()[j].is_object(c))
                })
                .collect()
        })
        .collect()
}

/// All wide subgroupoids, smallest first then lexicographically. Parents
/// larger than [`ENUMERATION_CAP`] are rejected.
pub fn wide_subgroupoids(parent: &GroupoidTable) -> Result<Vec<ElementSet>, SubgroupoidError> {
    enumerate_from(parent, vec![parent.object_set()])
}

/// All subgroupoids, wide or not, in the same order as
/// [`wide_subgroupoids`].
pub fn all_subgroupoids(parent: &GroupoidTable) -> Result<Vec<ElementSet>, SubgroupoidError> {
    let seeds = parent
        .elements()
        .map(|g| generated_subgroupoid(parent, &[g].into_iter().collect()))
        .collect();
    enumerate_from(parent, seeds)
}

fn enumerate_from(parent: &GroupoidTable, seeds: Vec<ElementSet>) -> Result<Vec<ElementSet>, SubgroupoidError> {
    if parent.len() > ENUMERATION_CAP {
        return Err(SubgroupoidError::TooLarge {
            cap: ENUMERATION_CAP,
            len: parent.len(),
        });
    }
    let mut found: alloc::collections::BTreeSet<ElementSet> = alloc::collections::BTreeSet::new();
    let mut queue = seeds;
    while let Some(s) = queue.pop() {
        if !found.insert(s.clone()) {
            continue;
        }
        for g in parent.elements() {
            if s.contains(&g) {
                continue;
            }
            let mut t = s.clone();
            t.insert(g);
            let t = generated_subgroupoid(parent, &t);
            if !found.contains(&t) {
                queue.push(t);
            }
        }
    }
    let mut out: Vec<ElementSet> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// How many restricted tuples multiply to each element.
pub fn factorization_counts(parent: &GroupoidTable, subs: &[ElementSet]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for t in restricted_tuples(parent, subs) {
        if let Some(g) = parent.comp_chain(&t) {
            *out.entry(g).or_insert(0) += 1;
        }
    }
    out
}
