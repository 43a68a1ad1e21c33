//! Universal globalization of strict partial actions.
//!
//! `Y` is the set of pairs `(g, x)` with `d(g) = e_x`, modulo
//! `(g, x) ~ (h, y)` iff `r(g) = r(h)` and `(h⁻¹g)·x = y`. The group of
//! arrows acts by `g'·[g, x] = [g'g, x]` and `ι(x) = [e_x, x]`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::action::{action_groupoid, morphism_witness, ActionError, PartialActionTable, PointMap};
use crate::equivalence::{projection, EquivalenceError};
use crate::functor::{FunctorError, GroupoidFunctor};
use crate::groupoid::ElementSet;
use crate::naming;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlobalizationError {
    #[error("action is not strict at point `{0}`")]
    NotStrict(String),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
    #[error("relation on pairs is not an equivalence: {0}")]
    NotEquivalence(String),
    #[error("target action is not global")]
    NotGlobal,
    #[error("not an action morphism: {0}")]
    NotAMorphism(String),
    #[error("candidate is ill defined on class `{0}`")]
    IllDefined(String),
    #[error("no mediating morphism exists")]
    NoMediating,
    #[error("{0} mediating morphisms exist")]
    Ambiguous(usize),
    #[error("internal check failed: {0}")]
    Invariant(String),
}

/// A globalization `ι : α → β` with its class structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Globalization {
    pub base: PartialActionTable,
    pub beta: PartialActionTable,
    pub iota: PointMap,
    /// Members `(g, x)` of each class, least first; the class is named
    /// after its least member.
    pub classes: Vec<Vec<(usize, usize)>>,
}

impl Globalization {
    pub fn class_name(&self, c: usize) -> &str {
        self.beta.point_name(c)
    }
}

fn union_find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn globalize(p: &PartialActionTable) -> Result<Globalization, GlobalizationError> {
    let ex = p.identity_index().map_err(|e| match e {
        ActionError::NotStrict(x) => GlobalizationError::NotStrict(x),
        other => other.into(),
    })?;
    let rep = p.validate();
    if !rep.passed() {
        return Err(ActionError::Invalid(format!("{rep}")).into());
    }
    let t = p.groupoid().clone();
    let pairs: Vec<(usize, usize)> = t
        .elements()
        .flat_map(|g| (0..p.carrier_len()).map(move |x| (g, x)))
        .filter(|&(g, x)| t.d(g) == ex[x])
        .collect();
    let related = |(g, x): (usize, usize), (h, y): (usize, usize)| {
        t.r(g) == t.r(h)
            && t
                .comp(t.inv(h), g)
                .and_then(|hg| p.get(hg, x))
                .is_some_and(|v| v == y)
    };
    let name_pair = |(g, x): (usize, usize)| format!("({},{})", t.name_of(g), p.point_name(x));

    // The relation must be an equivalence; check before quotienting.
    let n = pairs.len();
    let rel: Vec<Vec<bool>> = pairs
        .iter()
        .map(|&a| pairs.iter().map(|&b| related(a, b)).collect())
        .collect();
    for i in 0..n {
        if !rel[i][i] {
            return Err(GlobalizationError::NotEquivalence(format!("not reflexive at {}", name_pair(pairs[i]))));
        }
        for j in 0..n {
            if rel[i][j] != rel[j][i] {
                return Err(GlobalizationError::NotEquivalence(format!(
                    "not symmetric at {}, {}",
                    name_pair(pairs[i]),
                    name_pair(pairs[j])
                )));
            }
            if !rel[i][j] {
                continue;
            }
            if let Some(k) = (0..n).find(|&k| rel[j][k] && !rel[i][k]) {
                return Err(GlobalizationError::NotEquivalence(format!(
                    "not transitive at {}, {}, {}",
                    name_pair(pairs[i]),
                    name_pair(pairs[j]),
                    name_pair(pairs[k])
                )));
            }
        }
    }

    let mut uf: Vec<usize> = (0..n).collect();
    for (i, row) in rel.iter().enumerate() {
        for j in (i + 1..n).filter(|&j| row[j]) {
            let (a, b) = (union_find_root(&mut uf, i), union_find_root(&mut uf, j));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            uf[hi] = lo;
        }
    }
    // Pairs are enumerated in (g, x) order, so the first member of each
    // class is its least representative.
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut class_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, &pair) in pairs.iter().enumerate() {
        let root = union_find_root(&mut uf, i);
        let c = *class_of_root.entry(root).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(pair);
        class_of.insert(pair, c);
    }
    let points: Vec<String> = classes
        .iter()
        .map(|m| naming::class(t.name_of(m[0].0), p.point_name(m[0].1)))
        .collect();

    let mut triples = Vec::new();
    for (c, members) in classes.iter().enumerate() {
        let (g, x) = members[0];
        for g2 in t.elements() {
            let Some(gg) = t.comp(g2, g) else { continue };
            let target = class_of[&(gg, x)];
            // Well-definedness: every member must land in the same class.
            for &(h, y) in &members[1..] {
                let hh = t.comp(g2, h).expect("members share a range");
                if class_of[&(hh, y)] != target {
                    return Err(GlobalizationError::Invariant(format!(
                        "action of `{}` is not well defined on `{}`",
                        t.name_of(g2),
                        points[c]
                    )));
                }
            }
            triples.push((g2, c, target));
        }
    }
    let beta = PartialActionTable::new(format!("glob({})", p.name()), t.clone(), points, triples)?;
    let iota: PointMap = (0..p.carrier_len()).map(|x| class_of[&(ex[x], x)]).collect();

    let brep = beta.validate();
    if !brep.passed() {
        return Err(GlobalizationError::Invariant(format!("beta is not a partial action: {brep}")));
    }
    if !beta.is_global() {
        return Err(GlobalizationError::Invariant("beta is not global".to_string()));
    }
    if let Some((g, x)) = morphism_witness(&iota, p, &beta)? {
        return Err(GlobalizationError::Invariant(format!(
            "iota is not equivariant at {}",
            name_pair((g, x))
        )));
    }
    let mut seen = vec![false; beta.carrier_len()];
    if iota.iter().any(|&c| core::mem::replace(&mut seen[c], true)) {
        return Err(GlobalizationError::Invariant("iota is not injective".to_string()));
    }
    Ok(Globalization {
        base: p.clone(),
        beta,
        iota,
        classes,
    })
}

/// `ν(g, x) = (g, ι(x))` from `(G, X)` into `(G, Y)`. Verified functorial,
/// injective and with `Π ∘ ν = Γ`.
pub fn nu_embedding(gl: &Globalization) -> Result<GroupoidFunctor, GlobalizationError> {
    nu_for(&gl.base, &gl.beta, &gl.iota)
}

fn nu_for(
    base: &PartialActionTable,
    beta: &PartialActionTable,
    iota: &[usize],
) -> Result<GroupoidFunctor, GlobalizationError> {
    let (ax, gamma) = projection(base)?;
    let (ay, pi) = projection(beta)?;
    let map = (0..ax.table().len())
        .map(|i| {
            let (g, x) = ax.pair(i);
            ay.index_of_pair(g, iota[x])
                .ok_or_else(|| GlobalizationError::NotAMorphism(format!("iota drops `{}`", ax.table().name_of(i))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let nu = GroupoidFunctor::new(gamma.source().clone(), pi.source().clone(), map)?;
    nu.require_functorial()?;
    if !nu.is_injective() {
        return Err(GlobalizationError::Invariant("nu is not injective".to_string()));
    }
    if pi.compose(&nu)?.map() != gamma.map() {
        return Err(GlobalizationError::Invariant("projection after nu differs from the base projection".to_string()));
    }
    Ok(nu)
}

/// Fullness and density of `ν((G, X))` inside `(G, Y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullDense {
    pub full: bool,
    pub dense: bool,
    pub report: ValidationReport,
}

pub fn check_full_dense(gl: &Globalization) -> Result<FullDense, GlobalizationError> {
    check_full_dense_for(&gl.base, &gl.beta, &gl.iota)
}

/// Same check for any global `beta` with an equivariant injection `iota`,
/// e.g. a deliberately enlarged globalization.
pub fn check_full_dense_for(
    base: &PartialActionTable,
    beta: &PartialActionTable,
    iota: &[usize],
) -> Result<FullDense, GlobalizationError> {
    let nu = nu_for(base, beta, iota)?;
    let ay = action_groupoid(beta)?;
    let c = ay.table();
    let image = nu.image();
    let image_objects: ElementSet = image.iter().copied().filter(|&k| c.is_object(k)).collect();
    let mut report = ValidationReport::new();
    let mut full = true;
    for k in c.elements() {
        if image.contains(&c.d(k)) && image.contains(&c.r(k)) && !image.contains(&k) {
            report.push("full", vec![c.name_of(k).to_string()], "arrow between image objects is missing from the image".to_string());
            full = false;
            break;
        }
    }
    let mut dense = true;
    for &e in c.objects() {
        if !c.star(e).any(|k| image_objects.contains(&c.r(k))) {
            report.push("dense", vec![c.name_of(e).to_string()], "identity is not isomorphic to an identity of the image".to_string());
            dense = false;
            break;
        }
    }
    Ok(FullDense { full, dense, report })
}

/// All morphisms `k : β → q` with `k ∘ ι = j`, by backtracking with
/// forced propagation `k(g·y) = g·k(y)`. Stops after `limit` solutions.
pub fn mediating_morphisms(
    gl: &Globalization,
    q: &PartialActionTable,
    j: &[usize],
    limit: usize,
) -> Result<Vec<PointMap>, GlobalizationError> {
    if q.groupoid() != gl.beta.groupoid() {
        return Err(ActionError::GroupoidMismatch.into());
    }
    if !q.is_global() {
        return Err(GlobalizationError::NotGlobal);
    }
    if let Some((g, x)) = morphism_witness(j, &gl.base, q)? {
        return Err(GlobalizationError::NotAMorphism(format!(
            "j fails at `{}·{}`",
            q.groupoid().name_of(g),
            gl.base.point_name(x)
        )));
    }
    let beta = &gl.beta;
    let m = beta.carrier_len();
    let mut start = vec![None; m];
    for (x, &y) in gl.iota.iter().enumerate() {
        start[y] = Some(j[x]);
    }

    fn propagate(beta: &PartialActionTable, q: &PartialActionTable, k: &mut [Option<usize>]) -> bool {
        let mut changed = true;
        while changed {
            changed = false;
            for ((g, y), gy) in beta.pairs() {
                let Some(ky) = k[y] else { continue };
                let Some(v) = q.get(g, ky) else { return false };
                match k[gy] {
                    Some(w) if w != v => return false,
                    Some(_) => {}
                    None => {
                        k[gy] = Some(v);
                        changed = true;
                    }
                }
            }
        }
        true
    }

    fn search(
        beta: &PartialActionTable,
        q: &PartialActionTable,
        k: Vec<Option<usize>>,
        limit: usize,
        out: &mut Vec<PointMap>,
    ) {
        if out.len() >= limit {
            return;
        }
        let mut k = k;
        if !propagate(beta, q, &mut k) {
            return;
        }
        match k.iter().position(|v| v.is_none()) {
            None => out.push(k.into_iter().map(|v| v.expect("assigned")).collect()),
            Some(y) => {
                for z in 0..q.carrier_len() {
                    let mut next = k.clone();
                    next[y] = Some(z);
                    search(beta, q, next, limit, out);
                }
            }
        }
    }

    let mut out = Vec::new();
    search(beta, q, start, limit, &mut out);
    for k in &out {
        if morphism_witness(k, beta, q)?.is_some() {
            return Err(GlobalizationError::Invariant("search produced a non-morphism".to_string()));
        }
    }
    Ok(out)
}

/// The unique `k : β → q` with `j = k ∘ ι`. The class-wise candidate
/// `k[g, x] = g·j(x)` is checked for well-definedness and compared with an
/// exhaustive search.
pub fn verify_universal(
    gl: &Globalization,
    q: &PartialActionTable,
    j: &[usize],
) -> Result<PointMap, GlobalizationError> {
    let found = mediating_morphisms(gl, q, j, 2)?;
    let mut candidate = Vec::with_capacity(gl.classes.len());
    for (c, members) in gl.classes.iter().enumerate() {
        let mut value = None;
        for &(g, x) in members {
            let v = q.get(g, j[x]).ok_or(GlobalizationError::NoMediating)?;
            if value.is_some_and(|w| w != v) {
                return Err(GlobalizationError::IllDefined(gl.class_name(c).to_string()));
            }
            value = Some(v);
        }
        candidate.push(value.expect("classes are nonempty"));
    }
    match found.len() {
        0 => Err(GlobalizationError::NoMediating),
        1 if found[0] == candidate => Ok(candidate),
        1 => Err(GlobalizationError::Invariant("search and class-wise candidate disagree".to_string())),
        n => Err(GlobalizationError::Ambiguous(n)),
    }
}
