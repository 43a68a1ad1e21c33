//! Pair groupoids and the splitting of a connected groupoid as
//! `G₀² × G_e`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::functor::GroupoidFunctor;
use crate::groupoid::{GroupoidTable, RawTable, TableError};
use crate::naming;
use crate::product::{direct_product, DirectProduct, ProductError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConnectedError {
    #[error("groupoid is not connected")]
    NotConnected,
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("internal check failed: {0}")]
    Invariant(String),
}

/// The pair (coarse) groupoid on `objs`: `(p|q)` is the unique arrow
/// `p -> q`, and `(y|z)(x|y) = (x|z)`.
pub fn pair_groupoid<S: AsRef<str>>(objs: &[S]) -> Result<GroupoidTable, TableError> {
    if objs.is_empty() {
        return Err(TableError::NoObjects);
    }
    let n = objs.len();
    let at = |p: usize, q: usize| p * n + q;
    let mut raw = RawTable {
        name: "pair".to_string(),
        elements: Vec::with_capacity(n * n),
        objects: (0..n).map(|p| at(p, p)).collect(),
        dom: Vec::with_capacity(n * n),
        rng: Vec::with_capacity(n * n),
        inv: Vec::with_capacity(n * n),
        comp: Vec::with_capacity(n * n * n),
    };
    for p in 0..n {
        for q in 0..n {
            raw.elements
                .push(naming::tuple([objs[p].as_ref(), objs[q].as_ref()]));
            raw.dom.push(at(p, p));
            raw.rng.push(at(q, q));
            raw.inv.push(at(q, p));
            for z in 0..n {
                raw.comp.push((at(q, z), at(p, q), at(p, z)));
            }
        }
    }
    GroupoidTable::from_raw(raw)
}

/// An isomorphism `G → pair(G₀) × G_e` and its inverse.
#[derive(Debug, Clone)]
pub struct ConnectedIso {
    pub base: usize,
    pub product: DirectProduct,
    pub forward: GroupoidFunctor,
    pub backward: GroupoidFunctor,
}

/// Splits a connected groupoid along the base object `e`.
///
/// For each object `p` a transversal `τ_p : e -> p` is fixed: `τ_e = e`, and
/// otherwise the first element in declared order linking `e` to `p`. Then
/// `g : p -> q` maps to `((p|q), τ_q⁻¹ g τ_p)`.
pub fn build_connected_iso(t: &GroupoidTable, e: usize) -> Result<ConnectedIso, ConnectedError> {
    let iso = t.isotropy_group(e)?;
    if !t.is_connected() {
        return Err(ConnectedError::NotConnected);
    }
    let objs = t.objects();
    let obj_names: Vec<&str> = objs.iter().map(|&o| t.name_of(o)).collect();
    let pair = pair_groupoid(&obj_names)?;
    let local = t.restrict(&iso, alloc::format!("{}@{}", t.name(), t.name_of(e)))?;
    let product = direct_product(&[pair.clone(), local.clone()])?;

    let tau: Vec<usize> = objs
        .iter()
        .map(|&p| {
            if p == e {
                e
            } else {
                t.hom(e, p).next().expect("connected")
            }
        })
        .collect();
    let slot = |o: usize| objs.iter().position(|&p| p == o).expect("object");
    let n = objs.len();
    let mut map = Vec::with_capacity(t.len());
    for g in t.elements() {
        let (p, q) = (slot(t.d(g)), slot(t.r(g)));
        let loop_at_e = t
            .comp_chain(&[t.inv(tau[q]), g, tau[p]])
            .ok_or_else(|| ConnectedError::Invariant("transversal does not compose".to_string()))?;
        let local_idx = local.lookup(t.name_of(loop_at_e))?;
        map.push(
            product
                .index_of_tuple(&[p * n + q, local_idx])
                .expect("pair × local tuple"),
        );
    }
    let forward = GroupoidFunctor::new(Arc::new(t.clone()), Arc::new(product.table().clone()), map)
        .map_err(|err| ConnectedError::Invariant(err.to_string()))?;
    if !forward.is_isomorphism() {
        return Err(ConnectedError::Invariant(alloc::format!(
            "splitting map is not an isomorphism: {}",
            forward.verify()
        )));
    }
    let backward = forward.inverse().expect("bijective");
    Ok(ConnectedIso {
        base: e,
        product,
        forward,
        backward,
    })
}
