//! Shared report types for validators and axiom checkers.
//!
//! Every check produces clause entries rather than bare booleans so that a
//! failure names the witnessing data and a bounded search can distinguish
//! "false" from "not decidable at this bound".

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The bounded search space was exhausted without settling the clause.
    NotCheckableAtBound,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::NotCheckableAtBound => write!(f, "not-checkable-at-bound"),
        }
    }
}

/// One named clause of a report, with human-readable witness details.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub verdict: Verdict,
    /// Witness or counterexample description; stable across runs.
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub clauses: Vec<Clause>,
}

impl AxiomReport {
    pub fn new() -> AxiomReport {
        AxiomReport { clauses: Vec::new() }
    }

    pub fn record(&mut self, name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) {
        self.clauses.push(Clause {
            name: name.into(),
            verdict,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.record(name, Verdict::Pass, detail);
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.record(name, Verdict::Fail, detail);
    }

    pub fn all_passed(&self) -> bool {
        self.clauses.iter().all(|c| c.verdict.is_pass())
    }

    pub fn any_failed(&self) -> bool {
        self.clauses.iter().any(|c| c.verdict.is_fail())
    }

    pub fn any_not_checkable(&self) -> bool {
        self.clauses
            .iter()
            .any(|c| c.verdict == Verdict::NotCheckableAtBound)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.clauses.extend(other.clauses);
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            if c.detail.is_empty() {
                writeln!(f, "{}: {}", c.name, c.verdict)?;
            } else {
                writeln!(f, "{}: {} ({})", c.name, c.verdict, c.detail)?;
            }
        }
        Ok(())
    }
}
