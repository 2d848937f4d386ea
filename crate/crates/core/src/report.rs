//! Structured verification reports.
//!
//! A report is a tree of named checks. Witnesses are preformatted strings
//! (sets and tuples print deterministically), so identical inputs always
//! produce identical reports. Timing is kept out of the serialized form
//! unless explicitly requested, to preserve byte-for-byte determinism.

use serde::Serialize;

/// One named check with optional witnesses and sub-checks.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Check>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: true,
            witnesses: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: false,
            witnesses: vec![witness.into()],
            children: Vec::new(),
        }
    }

    /// A leaf check that passes unless a witness against it is given.
    pub fn leaf(name: impl Into<String>, counterexample: Option<String>) -> Check {
        match counterexample {
            None => Check::pass(name),
            Some(w) => Check::fail(name, w),
        }
    }

    /// A parent check that passes iff all its children pass.
    pub fn group(name: impl Into<String>, children: Vec<Check>) -> Check {
        let passed = children.iter().all(|c| c.passed);
        Check {
            name: name.into(),
            passed,
            witnesses: Vec::new(),
            children,
        }
    }
}

/// A named collection of checks; the top of a report tree.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Report schema version, bumped on breaking format changes.
    pub schema: u32,
    pub name: String,
    pub checks: Vec<Check>,
    /// Wall-clock duration, filled in only when timing output is requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_micros: Option<u64>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Report {
        Report {
            schema: 1,
            name: name.into(),
            checks: Vec::new(),
            elapsed_micros: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Order checks by name so report assembly never depends on completion order.
    pub fn sort_by_name(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    /// Names of failing checks, depth-first.
    pub fn failures(&self) -> Vec<String> {
        fn walk(prefix: &str, c: &Check, out: &mut Vec<String>) {
            let path = if prefix.is_empty() {
                c.name.clone()
            } else {
                format!("{prefix}/{}", c.name)
            };
            if !c.passed && c.children.is_empty() {
                out.push(path.clone());
            }
            for ch in &c.children {
                walk(&path, ch, out);
            }
        }
        let mut out = Vec::new();
        for c in &self.checks {
            walk("", c, &mut out);
        }
        out
    }
}
