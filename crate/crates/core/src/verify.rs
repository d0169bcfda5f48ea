//! Named property suites behind the `verify` command: each suite runs its
//! module's invariants on seeded samples and reports one line per invariant.

use crate::budget::Budget;

#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    /// Deterministic textual rendering, one line per invariant.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(if l.passed { "PASS" } else { "FAIL" });
            out.push(' ');
            out.push_str(&l.name);
            if !l.detail.is_empty() {
                out.push_str(" — ");
                out.push_str(&l.detail);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: Budget,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 7, budget: Budget::default() }
    }
}

mod gen;
mod suites;

pub use suites::{
    chains_suite, diffring_suite, growth_suite, ordinal_suite, polyring_suite, run_suite,
};
