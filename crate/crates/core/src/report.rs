//! Structured verdicts produced by the decision procedures.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// Degree -> dimension with zero entries omitted.
pub type DimTable = BTreeMap<i64, usize>;

/// Inclusive range of degrees (or weights) in which reported numbers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub min: Option<i64>,
    pub max: Option<i64>,
}

impl Window {
    pub const ALL: Window = Window { min: None, max: None };

    pub fn new(min: i64, max: i64) -> Self {
        Window { min: Some(min), max: Some(max) }
    }

    pub fn at_most(max: i64) -> Self {
        Window { min: None, max: Some(max) }
    }

    pub fn at_least(min: i64) -> Self {
        Window { min: Some(min), max: None }
    }

    pub fn contains(&self, d: i64) -> bool {
        self.min.map_or(true, |m| m <= d) && self.max.map_or(true, |m| d <= m)
    }

    /// Whether every degree of `other` lies in `self`.
    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        self.contains(lo) && self.contains(hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub windows: BTreeMap<String, Window>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub dims: BTreeMap<String, DimTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        CheckReport {
            check: check.into(),
            verdict,
            windows: BTreeMap::new(),
            dims: BTreeMap::new(),
            certificate: None,
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn with_certificate(mut self, c: impl Into<String>) -> Self {
        self.certificate = Some(c.into());
        self
    }

    pub fn with_note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn with_window(mut self, name: impl Into<String>, w: Window) -> Self {
        self.windows.insert(name.into(), w);
        self
    }

    pub fn with_dims(mut self, name: impl Into<String>, t: DimTable) -> Self {
        self.dims.insert(name.into(), t);
        self
    }

    /// A report whose verdict is the conjunction of its parts.
    pub fn all(check: impl Into<String>, parts: Vec<CheckReport>) -> Self {
        let verdict = if parts.iter().any(|p| p.verdict == Verdict::Fails) {
            Verdict::Fails
        } else if parts.iter().any(|p| p.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Holds
        };
        let mut r = CheckReport::new(check, verdict);
        r.parts = parts;
        r
    }
}
