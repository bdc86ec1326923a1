//! Verification reports and the deterministic parallel sweep used by every checker.

use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The violating input tuple and the nonzero left-minus-right defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub inputs: Vec<String>,
    pub defect: String,
}

impl Witness {
    pub fn new(inputs: impl IntoIterator<Item = String>, defect: impl ToString) -> Self {
        Witness {
            inputs: inputs.into_iter().collect(),
            defect: defect.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub axiom: String,
    pub clause: String,
    pub verdict: Verdict,
    pub checked: u64,
    /// Human-readable description of the quantified family.
    pub scope: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl VerificationReport {
    pub fn new(
        axiom: &str,
        clause: &str,
        scope: impl Into<String>,
        checked: u64,
        witness: Option<Witness>,
    ) -> Self {
        VerificationReport {
            axiom: axiom.to_string(),
            clause: clause.to_string(),
            verdict: if witness.is_some() {
                Verdict::Fail
            } else {
                Verdict::Pass
            },
            checked,
            scope: scope.into(),
            witness,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn summary(&self) -> String {
        match &self.witness {
            None => format!("{}: pass, {} tuples", self.axiom, self.checked),
            Some(w) => format!(
                "{}: fail after {} tuples; inputs [{}], defect {}",
                self.axiom,
                self.checked,
                w.inputs.join(", "),
                w.defect
            ),
        }
    }
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passed)
}

const CHUNK: usize = 1024;

/// Evaluates `f` on `0..total` in parallel chunks and stops at the first failing
/// chunk. The returned witness is the lowest failing index and `checked` counts
/// tuples up to and including it, so the result is independent of thread count.
pub fn sweep<F>(total: usize, f: F) -> (u64, Option<Witness>)
where
    F: Fn(usize) -> Option<Witness> + Sync,
{
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let hit = (start..end)
            .into_par_iter()
            .find_map_first(|i| f(i).map(|w| (i, w)));
        if let Some((i, w)) = hit {
            return ((i + 1) as u64, Some(w));
        }
        start = end;
    }
    (total as u64, None)
}

/// Runs [`sweep`] and packages the outcome.
pub fn check<F>(axiom: &str, clause: &str, scope: impl Into<String>, total: usize, f: F) -> VerificationReport
where
    F: Fn(usize) -> Option<Witness> + Sync,
{
    let (checked, witness) = sweep(total, f);
    VerificationReport::new(axiom, clause, scope, checked, witness)
}

/// Chains sub-sweeps into one record: the first failing part wins and the
/// tuple counts add up.
pub fn merge(axiom: &str, clause: &str, parts: Vec<VerificationReport>) -> VerificationReport {
    let mut checked = 0;
    let mut scopes = Vec::new();
    for p in parts {
        checked += p.checked;
        scopes.push(p.scope.clone());
        if p.witness.is_some() {
            return VerificationReport::new(axiom, clause, scopes.join("; "), checked, p.witness);
        }
    }
    VerificationReport::new(axiom, clause, scopes.join("; "), checked, None)
}
