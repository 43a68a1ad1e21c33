//! Element maps between groupoid tables and their functoriality check.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::groupoid::{ElementSet, GroupoidTable};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error("map has {got} entries but the source has {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("image index {0} is outside the target")]
    OutOfRange(usize),
    #[error("functors do not compose: target of the inner is not the source of the outer")]
    Mismatch,
    #[error("map is not functorial: {0}")]
    NotFunctorial(String),
}

/// An element map `source -> target`. Functoriality is not assumed; see
/// [`GroupoidFunctor::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidFunctor {
    source: Arc<GroupoidTable>,
    target: Arc<GroupoidTable>,
    map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn new(
        source: Arc<GroupoidTable>,
        target: Arc<GroupoidTable>,
        map: Vec<usize>,
    ) -> Result<Self, FunctorError> {
        if map.len() != source.len() {
            return Err(FunctorError::WrongLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&m| m >= target.len()) {
            return Err(FunctorError::OutOfRange(bad));
        }
        Ok(Self { source, target, map })
    }

    pub fn identity(t: Arc<GroupoidTable>) -> Self {
        let map = t.elements().collect();
        Self {
            source: t.clone(),
            target: t,
            map,
        }
    }

    /// Inclusion of a sub-table whose element names all occur in `parent`.
    pub fn inclusion(sub: Arc<GroupoidTable>, parent: Arc<GroupoidTable>) -> Option<Self> {
        let map = sub
            .element_names()
            .iter()
            .map(|n| parent.index_of(n))
            .collect::<Option<Vec<_>>>()?;
        Some(Self {
            source: sub,
            target: parent,
            map,
        })
    }

    pub fn source(&self) -> &Arc<GroupoidTable> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GroupoidTable> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    /// Checks that objects go to objects and that d, r, inverse and every
    /// defined composite are preserved.
    pub fn verify(&self) -> ValidationReport {
        let (s, t) = (&*self.source, &*self.target);
        let f = &self.map;
        let mut rep = ValidationReport::new();
        let w = |g: usize| vec![s.name_of(g).to_string(), t.name_of(f[g]).to_string()];
        for &e in s.objects() {
            if !t.is_object(f[e]) {
                rep.push("objects", w(e), format!("object {} maps to non-object {}", s.name_of(e), t.name_of(f[e])));
            }
        }
        for g in s.elements() {
            if f[s.d(g)] != t.d(f[g]) {
                rep.push("domain", w(g), format!("F(d({0})) differs from d(F({0}))", s.name_of(g)));
            }
            if f[s.r(g)] != t.r(f[g]) {
                rep.push("range", w(g), format!("F(r({0})) differs from r(F({0}))", s.name_of(g)));
            }
            if f[s.inv(g)] != t.inv(f[g]) {
                rep.push("inverse", w(g), format!("F(inv({0})) differs from inv(F({0}))", s.name_of(g)));
            }
        }
        for (g, h) in s.composable_pairs() {
            let Some(k) = s.comp(g, h) else { continue };
            let image = if t.composable(f[g], f[h]) { t.comp(f[g], f[h]) } else { None };
            if image != Some(f[k]) {
                rep.push(
                    "composition",
                    vec![s.name_of(g).to_string(), s.name_of(h).to_string()],
                    format!("F({0} {1}) differs from F({0}) F({1})", s.name_of(g), s.name_of(h)),
                );
            }
        }
        rep
    }

    pub fn is_functorial(&self) -> bool {
        self.verify().passed()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&m| !core::mem::replace(&mut seen[m], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    pub fn image(&self) -> ElementSet {
        self.map.iter().copied().collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupoidFunctor) -> Result<Self, FunctorError> {
        if *inner.target != *self.source {
            return Err(FunctorError::Mismatch);
        }
        Ok(Self {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: inner.map.iter().map(|&g| self.map[g]).collect(),
        })
    }

    /// The inverse element map of a bijection.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut map = vec![0; self.target.len()];
        for (g, &m) in self.map.iter().enumerate() {
            map[m] = g;
        }
        Some(Self {
            source: self.target.clone(),
            target: self.source.clone(),
            map,
        })
    }

    /// Verified isomorphism: bijective and functorial.
    pub fn is_isomorphism(&self) -> bool {
        self.is_bijective() && self.is_functorial()
    }

    pub(crate) fn require_functorial(&self) -> Result<(), FunctorError> {
        let rep = self.verify();
        if rep.passed() {
            Ok(())
        } else {
            Err(FunctorError::NotFunctorial(format!("{rep}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn identity_is_an_isomorphism() {
        let f = GroupoidFunctor::identity(Arc::new(catalog::e8()));
        assert!(f.is_isomorphism());
        assert_eq!(f.inverse().unwrap(), f);
    }

    #[test]
    fn constant_map_to_nonidentity_is_not_functorial() {
        let z2 = Arc::new(catalog::cyclic(2));
        let f = GroupoidFunctor::new(z2.clone(), z2, vec![1, 1]).unwrap();
        let rep = f.verify();
        assert!(rep.has("objects"));
        assert!(rep.has("composition"));
    }

    #[test]
    fn wrong_length_is_structural() {
        let z2 = Arc::new(catalog::cyclic(2));
        assert_eq!(
            GroupoidFunctor::new(z2.clone(), z2, vec![0]),
            Err(FunctorError::WrongLength { expected: 2, got: 1 })
        );
    }
}
