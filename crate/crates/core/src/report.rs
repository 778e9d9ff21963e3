use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Version tag carried by every serialized report.
pub const REPORT_SCHEMA: &str = "fotheory.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A counterexample found by a checker.
///
/// `params` carries the numeric coordinates of the failing case (for instance
/// `k`, `m`, `n` of an amalgamation), `elements` the labels of the offending
/// simplices in the order documented by the producing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub condition: String,
    pub params: BTreeMap<String, usize>,
    pub levels: Vec<usize>,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<String>,
}

impl Witness {
    pub fn new(condition: impl Into<String>) -> Self {
        Self {
            condition: condition.into(),
            params: BTreeMap::new(),
            levels: Vec::new(),
            elements: Vec::new(),
            maps: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: usize) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn element(mut self, level: usize, label: impl Into<String>) -> Self {
        self.levels.push(level);
        self.elements.push(label.into());
        self
    }

    pub fn map(mut self, map: impl Into<String>) -> Self {
        self.maps.push(map.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<usize> {
        self.params.get(key).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub check: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub stats: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(check: impl Into<String>) -> Self {
        Self {
            schema: REPORT_SCHEMA.to_string(),
            check: check.into(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
            stats: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Records a failure. The verdict only ever flips to fail together with a witness.
    pub fn push_witness(&mut self, witness: Witness) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(witness);
    }

    pub fn count(&mut self, stat: &str, by: u64) {
        *self.stats.entry(stat.to_string()).or_insert(0) += by;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.witnesses.first()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
