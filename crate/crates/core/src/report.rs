//! Structured pass/fail reports with witnesses.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One violated axiom instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Short machine-readable axiom name, e.g. `"closure"` or `"PGrA2"`.
    pub tag: &'static str,
    /// Element (or point) names witnessing the failure, in the order the
    /// message refers to them.
    pub witness: Vec<String>,
    pub message: String,
}

/// Outcome of an exhaustive axiom scan.
///
/// The report passes iff it holds no violations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn push(&mut self, tag: &'static str, witness: Vec<String>, message: String) {
        self.violations.push(Violation {
            tag,
            witness,
            message,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// True if some violation carries `tag`.
    pub fn has(&self, tag: &str) -> bool {
        self.violations.iter().any(|v| v.tag == tag)
    }

    /// Violations carrying `tag`, in scan order.
    pub fn with_tag<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.tag == tag)
    }

    /// Distinct tags in first-seen order.
    pub fn tags(&self) -> Vec<&'static str> {
        let mut tags: Vec<&'static str> = Vec::new();
        for v in &self.violations {
            if !tags.contains(&v.tag) {
                tags.push(v.tag);
            }
        }
        tags
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.tag, self.message)?;
        if !self.witness.is_empty() {
            write!(f, " (witness:")?;
            for w in &self.witness {
                write!(f, " {w}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "passed");
        }
        write!(f, "failed: {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}
