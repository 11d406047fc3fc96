//! Law-check reports.
//!
//! A [`Report`] is an ordered list of clauses. Each clause counts the
//! instances it examined and the instances that failed, and keeps the first
//! failing instance (in enumeration order) as its witness. Reports serialise
//! to line-delimited JSON, one record per clause, so two runs with the same
//! configuration produce byte-identical output.

use serde::{Deserialize, Serialize};
use std::fmt::{self, Write as _};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    /// Stable identifier, e.g. `doctrine.powerset.frobenius-right`.
    pub clause: String,
    /// Name of the law the clause checks.
    pub anchor: String,
    pub instances: usize,
    pub failures: usize,
    /// First failing instance, if any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// Informational remark (decisions, recorded-but-not-failed findings).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Clause {
    pub fn new(clause: impl Into<String>, anchor: impl Into<String>) -> Self {
        Clause {
            clause: clause.into(),
            anchor: anchor.into(),
            instances: 0,
            failures: 0,
            witness: None,
            note: None,
        }
    }

    /// Record one instance. `witness` is only rendered for the first failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    /// Record `count` instances sharing one verdict.
    pub fn check_many(&mut self, ok: bool, count: usize, witness: impl FnOnce() -> String) {
        self.instances += count;
        if !ok && count > 0 {
            self.failures += count;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Fold another clause with the same id into this one, keeping the
    /// earlier witness.
    pub fn merge(&mut self, other: Clause) {
        self.instances += other.instances;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        if self.note.is_none() {
            self.note = other.note;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }

    pub fn extend(&mut self, other: Report) {
        self.clauses.extend(other.clauses);
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(Clause::passed)
    }

    pub fn failures(&self) -> usize {
        self.clauses.iter().map(|c| c.failures).sum()
    }

    pub fn get(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.clause == id)
    }

    /// Clauses whose id ends with `suffix`.
    pub fn matching<'a>(&'a self, suffix: &'a str) -> impl Iterator<Item = &'a Clause> + 'a {
        self.clauses.iter().filter(move |c| c.clause.ends_with(suffix))
    }

    pub fn failed_clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed())
    }

    /// Line-delimited JSON, one clause per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for c in &self.clauses {
            out.push_str(&serde_json::to_string(c).expect("clause serialises"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, serde_json::Error> {
        let clauses = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Report { clauses })
    }

    /// Human-readable table.
    pub fn summary(&self) -> String {
        let width = self.clauses.iter().map(|c| c.clause.len()).max().unwrap_or(6).max(6);
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:>9}  {:>8}  status", "clause", "instances", "failures");
        for c in &self.clauses {
            let status = if c.passed() { "ok" } else { "FAIL" };
            let _ = writeln!(out, "{:<width$}  {:>9}  {:>8}  {status}", c.clause, c.instances, c.failures);
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "{:<width$}    witness: {w}", "");
            }
            if let Some(n) = &c.note {
                let _ = writeln!(out, "{:<width$}    note: {n}", "");
            }
        }
        let _ = writeln!(
            out,
            "{} clauses, {} failing",
            self.clauses.len(),
            self.failed_clauses().count()
        );
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_witness_is_kept() {
        let mut c = Clause::new("x", "law");
        c.check(true, || "a".into());
        c.check(false, || "b".into());
        c.check(false, || "c".into());
        assert_eq!(c.instances, 3);
        assert_eq!(c.failures, 2);
        assert_eq!(c.witness.as_deref(), Some("b"));
    }

    #[test]
    fn jsonl_round_trips() {
        let mut r = Report::new();
        let mut c = Clause::new("a.b", "law");
        c.check(false, || "w".into());
        r.push(c);
        r.push(Clause::new("c", "other").with_note("n"));
        let text = r.to_jsonl();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(Report::from_jsonl(&text).unwrap(), r);
    }
}
