//! Finite groupoids and partial groupoid actions as explicit tables.
//!
//! Every structure in this crate is a finite, fully enumerated table: a
//! groupoid is an element list with domain, range, inverse and a partial
//! composition map; a partial action is an explicit domain of
//! `(element, point)` pairs. Constructions (direct and semidirect products,
//! action groupoids, globalizations, ...) produce new tables, and every
//! claimed property can be re-checked by brute force.
//!
//! Composition convention: `comp(g, h)` is "`g` after `h`" and exists exactly
//! when `d(g) = r(h)`.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod action;
pub mod catalog;
pub mod closure;
pub mod connected;
pub mod equivalence;
pub mod functor;
pub mod globalization;
pub mod groupoid;
pub mod product;
pub mod report;
pub mod subgroupoid;

mod naming;

pub use action::{ActionError, ActionGroupoid, PartialActionTable, PointMap};
pub use closure::{complete, complete_closure, CompletionError};
pub use connected::{build_connected_iso, pair_groupoid, ConnectedIso};
pub use equivalence::{EquivalenceError, FunctorClass, SetFunctor};
pub use functor::{FunctorError, GroupoidFunctor};
pub use globalization::{Globalization, GlobalizationError};
pub use groupoid::{ElementSet, GroupoidTable, RawTable, TableBuilder, TableError};
pub use product::{AutAction, DirectProduct, ProductError, SemidirectProduct};
pub use report::{ValidationReport, Violation};
pub use subgroupoid::SubgroupoidError;
