//! Completion of a partial composition table to a groupoid.
//!
//! Products are deduced from the groupoid laws (identities, inverses,
//! inverse of a product, cancellation, associativity) until a fixed point.
//! When a composable pair is still undetermined, a fresh element is created
//! for it together with a fresh inverse, and deduction resumes; fresh
//! elements that are later forced equal to something else are merged away.
//! Forcing two declared elements to coincide is a contradiction.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::groupoid::{GroupoidTable, RawTable, TableBuilder, TableError};

/// Upper bound on fresh elements before completion gives up.
pub const DEFAULT_FRESH_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("inverse map is inconsistent at `{0}`")]
    InconsistentInverse(String),
    #[error("contradiction: {}", .chain.join("; "))]
    Contradiction { chain: Vec<String> },
    #[error("completion needs more than {0} fresh elements")]
    TooManyElements(usize),
    #[error("completed table fails validation: {0}")]
    Invariant(String),
}

/// Completes the declarations of a builder. Conflicting declared products are
/// reported as a contradiction rather than a build error.
pub fn complete(builder: &TableBuilder) -> Result<GroupoidTable, CompletionError> {
    complete_with_limit(builder, DEFAULT_FRESH_LIMIT)
}

pub fn complete_with_limit(builder: &TableBuilder, limit: usize) -> Result<GroupoidTable, CompletionError> {
    let sk = builder.skeleton()?;
    let facts = builder.resolved_products(&sk)?;
    let seed = Seed {
        name: sk.name,
        elements: sk.elements,
        objects: sk.objects,
        dom: sk.dom,
        rng: sk.rng,
        inv: sk.inv,
        facts,
    };
    run(seed, limit)
}

/// Completes an existing table, keeping its element order. A table that is
/// already a groupoid comes back unchanged.
pub fn complete_closure(t: &GroupoidTable) -> Result<GroupoidTable, CompletionError> {
    let raw = t.to_raw();
    for &(g, h, _) in &raw.comp {
        if !t.composable(g, h) {
            return Err(TableError::NotComposable {
                g: t.name_of(g).to_string(),
                h: t.name_of(h).to_string(),
                dg: t.name_of(t.d(g)).to_string(),
                rh: t.name_of(t.r(h)).to_string(),
            }
            .into());
        }
    }
    run(
        Seed {
            name: raw.name,
            elements: raw.elements,
            objects: raw.objects,
            dom: raw.dom,
            rng: raw.rng,
            inv: raw.inv,
            facts: raw.comp,
        },
        DEFAULT_FRESH_LIMIT,
    )
}

struct Seed {
    name: String,
    elements: Vec<String>,
    objects: Vec<usize>,
    dom: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    facts: Vec<(usize, usize, usize)>,
}

struct Engine {
    names: Vec<String>,
    declared: usize,
    parent: Vec<usize>,
    dom: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    facts: BTreeMap<(usize, usize), (usize, String)>,
    dirty: bool,
    changed: bool,
}

fn run(seed: Seed, limit: usize) -> Result<GroupoidTable, CompletionError> {
    check_inverses(&seed)?;
    let n = seed.elements.len();
    let mut eng = Engine {
        names: seed.elements,
        declared: n,
        parent: (0..n).collect(),
        dom: seed.dom,
        rng: seed.rng,
        inv: seed.inv,
        facts: BTreeMap::new(),
        dirty: false,
        changed: false,
    };
    for (g, h, k) in seed.facts {
        eng.set(g, h, k, "declared".to_string())?;
    }
    let mut fresh = 0usize;
    loop {
        eng.saturate()?;
        let Some((g, h)) = eng.first_missing() else { break };
        if fresh + 2 > limit {
            return Err(CompletionError::TooManyElements(limit));
        }
        let p = eng.fresh(eng.dom[h], eng.rng[g], fresh);
        let q = eng.fresh(eng.rng[g], eng.dom[h], fresh + 1);
        fresh += 2;
        eng.inv[p] = q;
        eng.inv[q] = p;
        let (hi, gi) = (eng.inv[h], eng.inv[g]);
        eng.set(g, h, p, "fresh element".to_string())?;
        eng.set(hi, gi, q, "fresh inverse".to_string())?;
    }
    eng.finish(seed.name, seed.objects)
}

fn check_inverses(seed: &Seed) -> Result<(), CompletionError> {
    for g in 0..seed.elements.len() {
        let gi = seed.inv[g];
        let ok = seed.inv[gi] == g && seed.dom[gi] == seed.rng[g] && seed.rng[gi] == seed.dom[g];
        if !ok {
            return Err(CompletionError::InconsistentInverse(seed.elements[g].clone()));
        }
    }
    for &e in &seed.objects {
        if seed.inv[e] != e || seed.dom[e] != e || seed.rng[e] != e {
            return Err(CompletionError::InconsistentInverse(seed.elements[e].clone()));
        }
    }
    Ok(())
}

impl Engine {
    fn find(&self, mut a: usize) -> usize {
        while self.parent[a] != a {
            a = self.parent[a];
        }
        a
    }

    fn fresh(&mut self, d: usize, r: usize, k: usize) -> usize {
        let id = self.names.len();
        self.names.push(format!("_p{k}"));
        self.parent.push(id);
        self.dom.push(d);
        self.rng.push(r);
        self.inv.push(id);
        id
    }

    fn describe(&self, g: usize, h: usize, k: usize, why: &str) -> String {
        format!("{} {} = {} ({why})", self.names[g], self.names[h], self.names[k])
    }

    fn set(&mut self, g: usize, h: usize, k: usize, why: String) -> Result<(), CompletionError> {
        let (g, h, k) = (self.find(g), self.find(h), self.find(k));
        match self.facts.get(&(g, h)) {
            None => {
                self.facts.insert((g, h), (k, why));
                self.changed = true;
                Ok(())
            }
            Some((prev, _)) if self.find(*prev) == k => Ok(()),
            Some((prev, prev_why)) => {
                let chain = alloc::vec![
                    self.describe(g, h, *prev, prev_why),
                    self.describe(g, h, k, &why),
                ];
                let prev = *prev;
                self.merge(prev, k, chain)
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize, chain: Vec<String>) -> Result<(), CompletionError> {
        let mut queue = alloc::vec![(a, b)];
        while let Some((a, b)) = queue.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            if a < self.declared && b < self.declared {
                let mut chain = chain.clone();
                chain.push(format!(
                    "forces distinct elements {} and {} to coincide",
                    self.names[a], self.names[b]
                ));
                return Err(CompletionError::Contradiction { chain });
            }
            if self.dom[a] != self.dom[b] || self.rng[a] != self.rng[b] {
                let mut chain = chain.clone();
                chain.push(format!(
                    "forces {} and {} with different endpoints to coincide",
                    self.names[a], self.names[b]
                ));
                return Err(CompletionError::Contradiction { chain });
            }
            let (keep, gone) = if a < b { (a, b) } else { (b, a) };
            self.parent[gone] = keep;
            self.dirty = true;
            self.changed = true;
            queue.push((self.inv[keep], self.inv[gone]));
        }
        Ok(())
    }

    /// Re-keys facts on current representatives, merging on collisions.
    fn canonicalize(&mut self) -> Result<(), CompletionError> {
        while self.dirty {
            self.dirty = false;
            for i in 0..self.inv.len() {
                self.inv[i] = self.find(self.inv[i]);
            }
            let old = core::mem::take(&mut self.facts);
            for ((g, h), (k, why)) in old {
                self.set(g, h, k, why)?;
            }
        }
        Ok(())
    }

    fn saturate(&mut self) -> Result<(), CompletionError> {
        loop {
            self.canonicalize()?;
            self.changed = false;
            let live: Vec<usize> = (0..self.names.len()).filter(|&i| self.find(i) == i).collect();
            let mut derived: Vec<(usize, usize, usize, String)> = Vec::new();
            for &g in &live {
                let gi = self.find(self.inv[g]);
                derived.push((self.rng[g], g, g, "identity law".into()));
                derived.push((g, self.dom[g], g, "identity law".into()));
                derived.push((gi, g, self.dom[g], "inverse law".into()));
                derived.push((g, gi, self.rng[g], "inverse law".into()));
            }
            let mut by_row: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
            for (&(g, h), &(k, _)) in &self.facts {
                by_row.entry(g).or_default().push((h, k));
            }
            let get = |g: usize, h: usize| self.facts.get(&(g, h)).map(|(k, _)| self.find(*k));
            for (&(g, h), (k, _)) in &self.facts {
                let k = self.find(*k);
                let (gi, hi, ki) = (self.inv[g], self.inv[h], self.inv[k]);
                let src = || format!("{} {} = {}", self.names[g], self.names[h], self.names[k]);
                derived.push((hi, gi, ki, format!("inverse of {}", src())));
                derived.push((gi, k, h, format!("cancellation in {}", src())));
                derived.push((k, hi, g, format!("cancellation in {}", src())));
                // (g h) t = g (h t)
                if let Some(row) = by_row.get(&h) {
                    for &(t, q) in row {
                        let q = self.find(q);
                        match (get(k, t), get(g, q)) {
                            (Some(m), None) => derived.push((
                                g,
                                q,
                                m,
                                format!("associativity of {} {} {}", self.names[g], self.names[h], self.names[t]),
                            )),
                            (None, Some(m)) => derived.push((
                                k,
                                t,
                                m,
                                format!("associativity of {} {} {}", self.names[g], self.names[h], self.names[t]),
                            )),
                            (Some(m1), Some(m2)) if m1 != m2 => {
                                derived.push((k, t, m2, format!(
                                    "associativity of {} {} {}",
                                    self.names[g], self.names[h], self.names[t]
                                )));
                            }
                            _ => {}
                        }
                    }
                }
            }
            for (g, h, k, why) in derived {
                self.set(g, h, k, why)?;
            }
            if !self.changed && !self.dirty {
                return Ok(());
            }
        }
    }

    fn first_missing(&self) -> Option<(usize, usize)> {
        let live: Vec<usize> = (0..self.names.len()).filter(|&i| self.find(i) == i).collect();
        for &g in &live {
            for &h in &live {
                if self.dom[g] == self.rng[h] && !self.facts.contains_key(&(g, h)) {
                    return Some((g, h));
                }
            }
        }
        None
    }

    fn finish(mut self, name: String, objects: Vec<usize>) -> Result<GroupoidTable, CompletionError> {
        self.canonicalize()?;
        let live: Vec<usize> = (0..self.names.len()).filter(|&i| self.find(i) == i).collect();
        let mut local = alloc::vec![usize::MAX; self.names.len()];
        let mut elements = Vec::with_capacity(live.len());
        let mut fresh = 0usize;
        for (i, &g) in live.iter().enumerate() {
            local[g] = i;
            if g < self.declared {
                elements.push(self.names[g].clone());
            } else {
                elements.push(format!("_p{fresh}"));
                fresh += 1;
            }
        }
        let at = |g: usize| local[self.find(g)];
        let raw = RawTable {
            name,
            elements,
            objects: objects.iter().map(|&o| at(o)).collect(),
            dom: live.iter().map(|&g| at(self.dom[g])).collect(),
            rng: live.iter().map(|&g| at(self.rng[g])).collect(),
            inv: live.iter().map(|&g| at(self.inv[g])).collect(),
            comp: self
                .facts
                .iter()
                .map(|(&(g, h), &(k, _))| (at(g), at(h), at(k)))
                .collect(),
        };
        let table = GroupoidTable::from_raw(raw)?;
        let report = table.validate();
        if !report.passed() {
            return Err(CompletionError::Invariant(format!("{report}")));
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn printed_example_completes_with_one_fresh_element() {
        let t = complete(&catalog::example_printed()).unwrap();
        assert_eq!(t.len(), 8);
        let p = t.lookup("_p0").unwrap();
        let id = |s| t.lookup(s).unwrap();
        assert_eq!(t.comp(id("u"), id("v")), Some(p));
        assert_eq!(t.comp(p, p), Some(id("y")));
        assert_eq!(t.inv(p), p);
        assert_eq!(t.d(p), id("y"));
        assert_eq!(t.r(p), id("y"));
    }

    #[test]
    fn complete_table_is_returned_unchanged() {
        let e8 = catalog::e8();
        assert_eq!(complete_closure(&e8).unwrap(), e8);
        let s3 = catalog::symmetric(3);
        assert_eq!(complete_closure(&s3).unwrap(), s3);
    }

    #[test]
    fn conflicting_declarations_are_a_contradiction() {
        let mut b = catalog::example_printed();
        b.product("v", "u", "x");
        match complete(&b) {
            Err(CompletionError::Contradiction { chain }) => {
                assert!(chain.iter().any(|c| c.contains("v u = a")), "{chain:?}");
                assert!(chain.iter().any(|c| c.contains("v u = x")), "{chain:?}");
            }
            other => panic!("expected contradiction, got {other:?}"),
        }
    }

    #[test]
    fn cyclic_group_from_generator_relation() {
        // a: e -> e with a∘a = b, a∘b = e, so a has order 3.
        let mut b = TableBuilder::new("Z3");
        b.object("e")
            .arrow("a", "e", "e")
            .arrow("b", "e", "e")
            .inverse("a", "b")
            .product("a", "a", "b");
        let t = complete(&b).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.validate().passed());
    }

    #[test]
    fn free_generator_does_not_terminate() {
        // a with a distinct inverse and no relations generates Z.
        let mut b = TableBuilder::new("Z");
        b.object("e").arrow("a", "e", "e").arrow("a-", "e", "e").inverse("a", "a-");
        assert_eq!(
            complete_with_limit(&b, 20),
            Err(CompletionError::TooManyElements(20))
        );
    }

    #[test]
    fn bad_inverse_is_rejected() {
        let mut b = TableBuilder::new("bad");
        b.objects(["x", "y"]).arrow("u", "x", "y").arrow("w", "x", "y").inverse("u", "w");
        assert!(matches!(complete(&b), Err(CompletionError::InconsistentInverse(_))));
    }
}
